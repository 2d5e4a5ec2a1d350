#include <doctest.h>

#include "fboal/network.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <span>
#include <vector>

using namespace fboal;

TEST_CASE("initialization is Glorot-uniform with zero biases") {
  const std::vector<int> sizes = {2, 50, 50, 50, 50, 1};
  const NetworkParams p = init_network(sizes, 11);

  for (int l = 0; l < p.n_layers(); ++l) {
    const int fan_in = sizes[l], fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        const double w = p.weight(l, r, c);
        CHECK(std::abs(w) <= bound);
        sum += w;
        sumsq += w * w;
      }
      CHECK(p.bias(l, r) == 0.0);
    }
    const double n = static_cast<double>(fan_in) * fan_out;
    const double var = sumsq / n - (sum / n) * (sum / n);
    // Uniform on [-b, b] has variance b^2 / 3.
    if (n >= 2500)
      CHECK(var == doctest::Approx(bound * bound / 3.0).epsilon(0.1));
  }
}

TEST_CASE("initialization is reproducible per seed") {
  const std::vector<int> sizes = {2, 50, 50, 1};
  const NetworkParams a = init_network(sizes, 5);
  const NetworkParams b = init_network(sizes, 5);
  const NetworkParams c = init_network(sizes, 6);
  CHECK(a.flat == b.flat);
  CHECK(a.flat != c.flat);
}

TEST_CASE("dual forward pass carries the same value as the plain one") {
  const NetworkParams p = init_network({2, 20, 20, 1}, 3);
  const std::vector<double> in = {0.3, -0.8};
  const double plain = forward<double>(p, in);
  const std::vector<Dual2<double>> din = {Dual2<double>::input(0.3, 1.0),
                                          Dual2<double>::input(-0.8, 0.0)};
  const Dual2<double> dual = forward<Dual2<double>>(p, din);
  CHECK(dual.v == doctest::Approx(plain).epsilon(1e-14));
}

TEST_CASE("directional derivatives match finite differences") {
  const NetworkParams p = init_network({2, 30, 30, 1}, 9);
  const std::vector<double> pt = {0.4, 0.6};
  for (int dir = 0; dir < 2; ++dir) {
    const Dual2<double> d = directional_derivs(p, pt, dir);
    const double h = 1e-5;
    auto eval = [&](double delta) {
      std::vector<double> q = pt;
      q[dir] += delta;
      return forward<double>(p, q);
    };
    const double d1 = (eval(h) - eval(-h)) / (2.0 * h);
    const double d2 = (eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h);
    CHECK(d.d1 == doctest::Approx(d1).epsilon(1e-8));
    CHECK(d.d2 == doctest::Approx(d2).epsilon(1e-4));
  }
}

TEST_CASE("hard-constraint transform pins initial and boundary values") {
  const double pi = 3.14159265358979323846;
  for (double raw : {-2.0, 0.0, 1.3}) {
    for (double x : {-1.0, -0.5, 0.0, 0.7, 1.0}) {
      // t = 0: the transform returns the initial condition exactly.
      const double at_t0 =
          apply_transform(TransformKind::burgers_hard, raw, x, 0.0);
      CHECK(at_t0 == doctest::Approx(-std::sin(pi * x)).epsilon(1e-14));
    }
    for (double t : {0.0, 0.5, 1.0}) {
      CHECK(apply_transform(TransformKind::burgers_hard, raw, 1.0, t) ==
            doctest::Approx(0.0));
      CHECK(apply_transform(TransformKind::burgers_hard, raw, -1.0, t) ==
            doctest::Approx(0.0));
    }
  }
}

TEST_CASE("snapshot save/load round-trips bit-exactly") {
  const NetworkParams p = init_network({3, 40, 40, 1}, 77);
  const std::string path =
      (std::filesystem::temp_directory_path() / "fboal_net_test.txt").string();
  p.save(path);
  const NetworkParams q = NetworkParams::load(path);
  std::remove(path.c_str());
  CHECK(q.layer_sizes == p.layer_sizes);
  CHECK(q.flat == p.flat);
}
