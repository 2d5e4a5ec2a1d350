#pragma once

#include "fboal/pde.hpp"
#include "fboal/points.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace fboal {

// Rectangular tiling of the (x, t) box into d = nx * nt half-open cells;
// the last cell along each axis is closed so every domain point maps to
// exactly one cell.
struct SubdomainGrid {
  double x_min, x_max, t_min, t_max;
  int nx = 1, nt = 1;

  int cell_count() const { return nx * nt; }
  int cell_of(double x, double t) const;
};

SubdomainGrid build_grid(const ProblemSpec &spec, double cell_size);
SubdomainGrid build_grid_d(const ProblemSpec &spec, int d);

enum class InitScheme { equidistant, uniform_random };

CollocationSet init_collocation(const ProblemSpec &spec, int n_per_param,
                                const std::vector<double> &param_values,
                                InitScheme scheme, std::uint64_t seed);

// Fresh uniform candidate pool with |C'| = 10 |C|; in parameterized mode
// candidate parameters are drawn uniformly from the training values.
CollocationSet candidate_pool(const ProblemSpec &spec,
                              const CollocationSet &C,
                              const std::vector<double> &param_values,
                              std::mt19937_64 &rng);

using ResidualFn = std::function<std::vector<double>(const std::vector<Point> &)>;

struct ResamplePlan {
  std::vector<Point> added;
  std::vector<std::size_t> removed; // indices into C.points
  long event_iteration = 0;
  bool clipped = false; // fewer than m usable cells in A or R
};

// One adaptive swap: per cell, the largest-|residual| candidate joins A
// and the smallest-|residual| member of C joins R; the plan then adds the
// m largest of A and removes the m smallest of R.  Equation subsets are
// handled independently with m split evenly between them.  Ties break on
// the lowest point index.
ResamplePlan fboal_step(const CollocationSet &C, const CollocationSet &pool,
                        const SubdomainGrid &grid,
                        const ResidualFn &residual_fn, int m);

void apply_plan(CollocationSet &C, const ResamplePlan &plan);

// Resamples the whole set from a finite uniform proposal pool with
// weights eps^kappa / mean(eps^kappa) + c, without replacement.
CollocationSet rad_resample(const CollocationSet &C, const ProblemSpec &spec,
                            const std::vector<double> &param_values,
                            const ResidualFn &residual_fn, double kappa,
                            double c, int pool_factor, std::mt19937_64 &rng);

// Draws m_add points from the same density and appends them.
CollocationSet rard_add(const CollocationSet &C, const ProblemSpec &spec,
                        const std::vector<double> &param_values,
                        const ResidualFn &residual_fn, double kappa, double c,
                        int m_add, std::mt19937_64 &rng);

// Deterministic top-m refinement: appends the m_add largest-|residual|
// candidates from a fresh pool.
CollocationSet rar_add(const CollocationSet &C, const ProblemSpec &spec,
                       const std::vector<double> &param_values,
                       const ResidualFn &residual_fn, int m_add,
                       std::mt19937_64 &rng);

// Round-robin equation tags; FBOAL then never trades points across
// equation subsets.
CollocationSet split_per_equation(const CollocationSet &C, int n_equations);

// Normalized density weights eps^kappa / mean(eps^kappa) + c; falls back
// to uniform when every residual is zero.
std::vector<double> rad_weights(const std::vector<double> &residuals,
                                double kappa, double c);

// Weighted sampling without replacement (exponential-key scheme); returns
// selected indices, stable under ties.
std::vector<std::size_t> sample_without_replacement(
    const std::vector<double> &weights, std::size_t n, std::mt19937_64 &rng);

} // namespace fboal
