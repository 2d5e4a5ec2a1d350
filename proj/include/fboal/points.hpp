#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace fboal {

// One collocation point: coordinates, the PDE-parameter value when the
// problem is parameterized, and the equation subset it belongs to.
struct Point {
  double x = 0.0;
  double t = 0.0;
  std::optional<double> param;
  int equation_index = 0;
};

struct CollocationSet {
  std::vector<Point> points;
  std::size_t budget = 0;

  std::size_t size() const { return points.size(); }
};

} // namespace fboal
