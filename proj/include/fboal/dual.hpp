#pragma once

#include <cmath>
#include <type_traits>

namespace fboal {

// Second-order dual number: carries a value together with the first and
// second directional derivative along a single direction.  Mixed
// derivatives are not representable; each direction needs its own pass.
template <typename T> struct Dual2 {
  T v;
  T d1;
  T d2;

  constexpr Dual2() : v(), d1(), d2() {}
  constexpr Dual2(const T &value) : v(value), d1(0.0), d2(0.0) {}
  constexpr Dual2(const T &value, const T &first, const T &second)
      : v(value), d1(first), d2(second) {}

  template <typename U = T,
            typename = std::enable_if_t<!std::is_same_v<U, double>>>
  constexpr Dual2(double value) : v(value), d1(0.0), d2(0.0) {}

  // Seeded input: d1 = 1 selects this coordinate as the differentiation
  // direction, d1 = 0 treats it as a passive input.
  static constexpr Dual2 input(const T &value, double seed_d1) {
    return {value, T(seed_d1), T(0.0)};
  }

  friend constexpr Dual2 operator+(const Dual2 &a) { return a; }
  friend constexpr Dual2 operator-(const Dual2 &a) {
    return {-a.v, -a.d1, -a.d2};
  }

  friend constexpr Dual2 operator+(const Dual2 &a, const Dual2 &b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
  }
  friend constexpr Dual2 operator-(const Dual2 &a, const Dual2 &b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
  }
  friend constexpr Dual2 operator*(const Dual2 &a, const Dual2 &b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * (a.d1 * b.d1) + a.v * b.d2};
  }
  friend constexpr Dual2 operator/(const Dual2 &a, const Dual2 &b) {
    const T q = a.v / b.v;
    const T q1 = (a.d1 - q * b.d1) / b.v;
    const T q2 = (a.d2 - 2.0 * (q1 * b.d1) - q * b.d2) / b.v;
    return {q, q1, q2};
  }

  Dual2 &operator+=(const Dual2 &b) { return *this = *this + b; }
  Dual2 &operator-=(const Dual2 &b) { return *this = *this - b; }
  Dual2 &operator*=(const Dual2 &b) { return *this = *this * b; }
  Dual2 &operator/=(const Dual2 &b) { return *this = *this / b; }
};

// f(g) with f0 = f(g.v), f1 = f'(g.v), f2 = f''(g.v).
template <typename T>
constexpr Dual2<T> chain(const T &f0, const T &f1, const T &f2,
                         const Dual2<T> &g) {
  return {f0, f1 * g.d1, f2 * (g.d1 * g.d1) + f1 * g.d2};
}

template <typename T> Dual2<T> tanh(const Dual2<T> &g) {
  using std::tanh;
  const T t = tanh(g.v);
  const T sech2 = 1.0 - t * t;
  return chain(t, sech2, -2.0 * (t * sech2), g);
}

template <typename T> Dual2<T> sin(const Dual2<T> &g) {
  using std::cos;
  using std::sin;
  const T s = sin(g.v);
  return chain(s, cos(g.v), -s, g);
}

template <typename T> Dual2<T> cos(const Dual2<T> &g) {
  using std::cos;
  using std::sin;
  const T c = cos(g.v);
  return chain(c, -sin(g.v), -c, g);
}

template <typename T> Dual2<T> sinh(const Dual2<T> &g) {
  using std::cosh;
  using std::sinh;
  const T s = sinh(g.v);
  return chain(s, cosh(g.v), s, g);
}

template <typename T> Dual2<T> cosh(const Dual2<T> &g) {
  using std::cosh;
  using std::sinh;
  const T c = cosh(g.v);
  return chain(c, sinh(g.v), c, g);
}

template <typename T> Dual2<T> exp(const Dual2<T> &g) {
  using std::exp;
  const T e = exp(g.v);
  return chain(e, e, e, g);
}

template <typename T> Dual2<T> sqr(const Dual2<T> &g) { return g * g; }

inline Dual2<double> lift_input(double x, double seed_d1) {
  return Dual2<double>::input(x, seed_d1);
}

} // namespace fboal
