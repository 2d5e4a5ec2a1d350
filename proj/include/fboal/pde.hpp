#pragma once

#include "fboal/network.hpp"
#include "fboal/points.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fboal {

// Problem definition: domain box, optional parameter interval (the PDE
// parameter becomes a normalized third input channel), output transform
// and soft-loss weights.
struct ProblemSpec {
  enum class Kind { burgers, wave };

  Kind kind = Kind::burgers;
  double x_min = -1.0, x_max = 1.0;
  double t_min = 0.0, t_max = 1.0;
  std::optional<std::pair<double, double>> param_range;
  double fixed_param = 0.01; // viscosity nu, or wave speed squared c^2
  TransformKind transform = TransformKind::burgers_hard;
  double w_ic = 1.0, w_bc = 1.0;
  int n_ic = 512, n_bc = 512;

  bool parameterized() const { return param_range.has_value(); }
  int input_dim() const { return parameterized() ? 3 : 2; }
  double half_width() const { return x_max; } // wave: l

  // Raw parameter values are badly conditioned against tanh, so the input
  // channel is the affine map of the training interval onto [-1, 1].
  double normalize_param(double p) const {
    const auto &[lo, hi] = *param_range;
    return (2.0 * p - lo - hi) / (hi - lo);
  }

  double point_param(const Point &pt) const {
    return pt.param ? *pt.param : fixed_param;
  }

  bool in_box(double x, double t) const {
    return x >= x_min && x <= x_max && t >= t_min && t <= t_max;
  }

  static ProblemSpec burgers(double nu);
  static ProblemSpec burgers_parameterized(double nu_lo, double nu_hi);
  static ProblemSpec wave(double c2);
  static ProblemSpec wave_parameterized(double c2_lo, double c2_hi);
};

// Initial condition of the wave problem.
double wave_initial(double x, double l);

namespace detail {

// Transformed network output with value / first / second derivative along
// one coordinate (0 = x, 1 = t).  T is double for plain evaluation or Var
// for recording on a reverse tape.
template <typename T, typename ParamAt>
Dual2<T> uhat_pass(const ProblemSpec &spec, const std::vector<int> &sizes,
                   ParamAt &&param_at, double x, double t, double pde_param,
                   int direction) {
  std::vector<Dual2<T>> in;
  in.push_back(Dual2<T>::input(T(x), direction == 0 ? 1.0 : 0.0));
  in.push_back(Dual2<T>::input(T(t), direction == 1 ? 1.0 : 0.0));
  if (spec.parameterized())
    in.push_back(Dual2<T>::input(T(spec.normalize_param(pde_param)), 0.0));
  const Dual2<T> raw = forward_mlp<Dual2<T>>(sizes, param_at, in);
  return apply_transform(spec.transform, raw, in[0], in[1]);
}

template <typename T, typename ParamAt>
T residual_T(const ProblemSpec &spec, const std::vector<int> &sizes,
             ParamAt &&param_at, double x, double t, double pde_param) {
  const Dual2<T> ux = uhat_pass<T>(spec, sizes, param_at, x, t, pde_param, 0);
  const Dual2<T> ut = uhat_pass<T>(spec, sizes, param_at, x, t, pde_param, 1);
  if (spec.kind == ProblemSpec::Kind::burgers)
    return ut.d1 + ux.v * ux.d1 - pde_param * ux.d2;
  // Wave: the printed closed-form solution is a sum of f(x +- ct)
  // profiles, which satisfies u_tt - c^2 u_xx = 0; the minus form is used
  // so that the exact solution is residual-free.
  return ut.d2 - pde_param * ux.d2;
}

template <typename T, typename ParamAt>
T pde_loss_T(const ProblemSpec &spec, const std::vector<int> &sizes,
             ParamAt &&param_at, const std::vector<Point> &points) {
  if (points.empty())
    throw std::invalid_argument("pde_loss: empty collocation set");
  T acc(0.0);
  for (const Point &p : points) {
    const T r =
        residual_T<T>(spec, sizes, param_at, p.x, p.t, spec.point_param(p));
    acc += r * r;
  }
  return acc / T(static_cast<double>(points.size()));
}

template <typename T, typename ParamAt>
std::pair<T, T> ic_bc_loss_T(const ProblemSpec &spec,
                             const std::vector<int> &sizes, ParamAt &&param_at,
                             const std::vector<Point> &ic_points,
                             const std::vector<Point> &bc_points) {
  T lic(0.0), lbc(0.0);
  if (spec.w_ic != 0.0) {
    if (ic_points.empty())
      throw std::invalid_argument("ic_bc_loss: empty IC set with w_ic != 0");
    for (const Point &p : ic_points) {
      const double pp = spec.point_param(p);
      const Dual2<T> u =
          uhat_pass<T>(spec, sizes, param_at, p.x, spec.t_min, pp, 1);
      T dev = u.v - T(spec.kind == ProblemSpec::Kind::wave
                          ? wave_initial(p.x, spec.half_width())
                          : -std::sin(3.14159265358979323846 * p.x));
      T term = dev * dev;
      if (spec.kind == ProblemSpec::Kind::wave)
        term += u.d1 * u.d1; // u_t(x, 0) = 0
      lic += term;
    }
    lic = lic * T(spec.w_ic / static_cast<double>(ic_points.size()));
  }
  if (spec.w_bc != 0.0) {
    if (bc_points.empty())
      throw std::invalid_argument("ic_bc_loss: empty BC set with w_bc != 0");
    for (const Point &p : bc_points) {
      const double pp = spec.point_param(p);
      const Dual2<T> u = uhat_pass<T>(spec, sizes, param_at, p.x, p.t, pp, 1);
      lbc += u.v * u.v;
    }
    lbc = lbc * T(spec.w_bc / static_cast<double>(bc_points.size()));
  }
  return {lic, lbc};
}

} // namespace detail

inline auto plain_params(const NetworkParams &p) {
  return [&p](std::size_t i) { return p.flat[i]; };
}

double burgers_residual(const NetworkParams &params, const ProblemSpec &spec,
                        double x, double t, double nu);
double wave_residual(const NetworkParams &params, const ProblemSpec &spec,
                     double x, double t, double c2);
double residual(const NetworkParams &params, const ProblemSpec &spec,
                const Point &p);

double pde_loss(const NetworkParams &params, const ProblemSpec &spec,
                const CollocationSet &C);

std::pair<double, double> ic_bc_loss(const NetworkParams &params,
                                     const ProblemSpec &spec,
                                     const std::vector<Point> &ic_points,
                                     const std::vector<Point> &bc_points);

struct LabeledPoint {
  Point point;
  double label = 0.0;
};

double data_loss(const NetworkParams &params, const ProblemSpec &spec,
                 const std::vector<LabeledPoint> &labeled);

// Network prediction at a point (transform applied).
double predict(const NetworkParams &params, const ProblemSpec &spec, double x,
               double t, double pde_param);

// Equidistant soft-constraint point sets.
std::vector<Point> make_ic_points(const ProblemSpec &spec);
std::vector<Point> make_bc_points(const ProblemSpec &spec);

} // namespace fboal
