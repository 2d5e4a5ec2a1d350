#include "fboal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fboal {

double relative_l2(const std::vector<double> &pred,
                   const std::vector<double> &ref) {
  if (pred.size() != ref.size())
    throw std::invalid_argument("relative_l2: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    num += (pred[i] - ref[i]) * (pred[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  if (den == 0.0)
    throw std::invalid_argument("relative_l2: zero reference norm");
  return std::sqrt(num / den);
}

double amplitude_relative_l2(const std::vector<double> &pred,
                             const std::vector<double> &ref) {
  if (pred.size() != ref.size())
    throw std::invalid_argument("amplitude_relative_l2: length mismatch");
  const auto [mn, mx] = std::minmax_element(ref.begin(), ref.end());
  if (!(*mx > *mn))
    throw std::invalid_argument("amplitude_relative_l2: constant reference");
  double num = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    num += (pred[i] - ref[i]) * (pred[i] - ref[i]);
  return std::sqrt(num) / (*mx - *mn);
}

std::pair<double, double> aggregate_runs(const std::vector<double> &values) {
  if (values.empty())
    throw std::invalid_argument("aggregate_runs: empty input");
  double log_sum = 0.0, sum = 0.0;
  for (double v : values) {
    if (v <= 0.0)
      throw std::invalid_argument(
          "aggregate_runs: geometric mean needs positive values");
    log_sum += std::log(v);
    sum += v;
  }
  const double geo = std::exp(log_sum / values.size());
  const double mean = sum / values.size();
  double var = 0.0;
  for (double v : values)
    var += (v - mean) * (v - mean);
  const double std_dev =
      values.size() > 1 ? std::sqrt(var / values.size()) : 0.0;
  return {geo, std_dev};
}

Histogram point_density(const std::vector<Point> &points, Axis axis, int bins,
                        double lo, double hi) {
  if (bins < 1)
    throw std::invalid_argument("point_density: bins < 1");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * i / bins;
  h.density.assign(bins, 0.0);
  std::size_t total = 0;
  for (const Point &p : points) {
    const double v = axis == Axis::x ? p.x : p.t;
    if (v < lo || v > hi)
      continue;
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    h.density[b] += 1.0;
    ++total;
  }
  if (total > 0)
    for (double &d : h.density)
      d /= static_cast<double>(total);
  return h;
}

} // namespace fboal
