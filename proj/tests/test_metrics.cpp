#include <doctest.h>

#include "fboal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace fboal;

TEST_CASE("relative error is invariant under joint rescaling") {
  const std::vector<double> ref = {1.0, -2.0, 3.0, 0.5};
  const std::vector<double> pred = {1.1, -1.9, 3.2, 0.4};
  const double e = relative_l2(pred, ref);
  std::vector<double> ref2 = ref, pred2 = pred;
  for (double &v : ref2)
    v *= 7.5;
  for (double &v : pred2)
    v *= 7.5;
  CHECK(relative_l2(pred2, ref2) == doctest::Approx(e).epsilon(1e-14));
  CHECK(relative_l2(ref, ref) == 0.0);
  CHECK_THROWS_AS(relative_l2({1.0}, ref), std::invalid_argument);
  CHECK_THROWS_AS(relative_l2({0.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("amplitude-normalized error divides by the reference range") {
  const std::vector<double> ref = {0.0, 4.0};
  const std::vector<double> pred = {1.0, 4.0};
  CHECK(amplitude_relative_l2(pred, ref) == doctest::Approx(0.25));
  CHECK_THROWS_AS(amplitude_relative_l2({1.0, 1.0}, {2.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("seed aggregation is a geometric mean, order independent") {
  std::vector<double> v = {0.01, 0.04, 0.09};
  const auto [geo, sd] = aggregate_runs(v);
  CHECK(geo == doctest::Approx(std::cbrt(0.01 * 0.04 * 0.09)).epsilon(1e-14));
  std::reverse(v.begin(), v.end());
  CHECK(aggregate_runs(v).first == doctest::Approx(geo).epsilon(1e-15));
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  CHECK(geo >= *mn);
  CHECK(geo <= *mx);
  CHECK(sd > 0.0);
  CHECK(aggregate_runs({0.5}).second == 0.0);
  CHECK_THROWS_AS(aggregate_runs({}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_runs({0.1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_runs({0.1, -0.2}), std::invalid_argument);
}

TEST_CASE("point density is a probability mass function over the bins") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i)
    pts.push_back({u(rng), 0.5 * (u(rng) + 1.0), std::nullopt, 0});
  // include exact endpoints, which must land in the first / last bins
  pts.push_back({-1.0, 0.0, std::nullopt, 0});
  pts.push_back({1.0, 1.0, std::nullopt, 0});

  for (Axis axis : {Axis::x, Axis::t}) {
    const double lo = axis == Axis::x ? -1.0 : 0.0;
    const Histogram h = point_density(pts, axis, 32, lo, 1.0);
    REQUIRE(h.edges.size() == 33);
    REQUIRE(h.density.size() == 32);
    double sum = 0.0;
    for (double d : h.density) {
      CHECK(d >= 0.0);
      sum += d;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  // points outside [lo, hi] are ignored, not clamped in
  const Histogram narrow = point_density(pts, Axis::x, 4, -0.1, 0.1);
  double sum = 0.0;
  for (double d : narrow.density)
    sum += d;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(point_density(pts, Axis::x, 0, -1.0, 1.0),
                  std::invalid_argument);
}
