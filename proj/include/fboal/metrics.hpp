#pragma once

#include "fboal/points.hpp"

#include <utility>
#include <vector>

namespace fboal {

// ||pred - ref||_2 / ||ref||_2
double relative_l2(const std::vector<double> &pred,
                   const std::vector<double> &ref);

// ||pred - ref||_2 / (max(ref) - min(ref)); note: not length-normalized.
double amplitude_relative_l2(const std::vector<double> &pred,
                             const std::vector<double> &ref);

// Geometric mean and arithmetic standard deviation over seeds.
std::pair<double, double> aggregate_runs(const std::vector<double> &values);

enum class Axis { x, t };

struct Histogram {
  std::vector<double> edges;   // bins + 1
  std::vector<double> density; // normalized counts, sums to 1
};

Histogram point_density(const std::vector<Point> &points, Axis axis, int bins,
                        double lo, double hi);

} // namespace fboal
