#pragma once

#include "fboal/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

// Exhaustive reference implementation of one adaptive swap, written
// directly from the contract: per cell and equation subset, the candidate
// with the largest |residual| is promotable and the member with the
// smallest |residual| is removable; the m/n_eq largest promotable and
// smallest removable entries are swapped, ties resolved toward the lowest
// point index.
namespace fboal::testing {

struct BrutePlan {
  std::multiset<std::pair<double, double>> added_coords;
  std::set<std::size_t> removed;
  bool clipped = false;
};

inline BrutePlan brute_fboal(const CollocationSet &C,
                             const CollocationSet &pool,
                             const SubdomainGrid &grid,
                             const std::vector<double> &res_c,
                             const std::vector<double> &res_p, int m) {
  BrutePlan out;
  if (m == 0 || C.points.empty())
    return out;
  int n_eq = 1;
  for (const Point &p : C.points)
    n_eq = std::max(n_eq, p.equation_index + 1);
  const int m_eq = std::max(1, m / n_eq);

  for (int eq = 0; eq < n_eq; ++eq) {
    std::map<int, std::size_t> arg_add, arg_rem;
    for (std::size_t i = 0; i < pool.points.size(); ++i) {
      const Point &p = pool.points[i];
      if (p.equation_index != eq)
        continue;
      const int cell = grid.cell_of(p.x, p.t);
      auto it = arg_add.find(cell);
      if (it == arg_add.end() ||
          std::abs(res_p[i]) > std::abs(res_p[it->second]))
        arg_add[cell] = i;
    }
    for (std::size_t i = 0; i < C.points.size(); ++i) {
      const Point &p = C.points[i];
      if (p.equation_index != eq)
        continue;
      const int cell = grid.cell_of(p.x, p.t);
      auto it = arg_rem.find(cell);
      if (it == arg_rem.end() ||
          std::abs(res_c[i]) < std::abs(res_c[it->second]))
        arg_rem[cell] = i;
    }

    std::vector<std::size_t> A, R;
    for (const auto &[cell, i] : arg_add)
      A.push_back(i);
    for (const auto &[cell, i] : arg_rem)
      R.push_back(i);
    std::stable_sort(A.begin(), A.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (std::abs(res_p[a]) != std::abs(res_p[b]))
                         return std::abs(res_p[a]) > std::abs(res_p[b]);
                       return a < b;
                     });
    std::stable_sort(R.begin(), R.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (std::abs(res_c[a]) != std::abs(res_c[b]))
                         return std::abs(res_c[a]) < std::abs(res_c[b]);
                       return a < b;
                     });
    const std::size_t swaps =
        std::min({static_cast<std::size_t>(m_eq), A.size(), R.size()});
    if (swaps < static_cast<std::size_t>(m_eq))
      out.clipped = true;
    for (std::size_t i = 0; i < swaps; ++i) {
      out.added_coords.insert({pool.points[A[i]].x, pool.points[A[i]].t});
      out.removed.insert(R[i]);
    }
  }
  return out;
}

} // namespace fboal::testing
