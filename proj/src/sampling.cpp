#include "fboal/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fboal {

int SubdomainGrid::cell_of(double x, double t) const {
  int ix = static_cast<int>((x - x_min) / (x_max - x_min) * nx);
  int it = static_cast<int>((t - t_min) / (t_max - t_min) * nt);
  ix = std::clamp(ix, 0, nx - 1);
  it = std::clamp(it, 0, nt - 1);
  return it * nx + ix;
}

SubdomainGrid build_grid(const ProblemSpec &spec, double cell_size) {
  const double sx = spec.x_max - spec.x_min;
  const double st = spec.t_max - spec.t_min;
  const double fx = sx / cell_size;
  const double ft = st / cell_size;
  const int nx = static_cast<int>(std::lround(fx));
  const int nt = static_cast<int>(std::lround(ft));
  if (nx < 1 || nt < 1 || std::abs(nx * cell_size - sx) > 1e-9 ||
      std::abs(nt * cell_size - st) > 1e-9)
    throw std::invalid_argument("build_grid: cell size does not tile the box");
  return {spec.x_min, spec.x_max, spec.t_min, spec.t_max, nx, nt};
}

SubdomainGrid build_grid_d(const ProblemSpec &spec, int d) {
  if (d < 1)
    throw std::invalid_argument("build_grid_d: d must be >= 1");
  const double sx = spec.x_max - spec.x_min;
  const double st = spec.t_max - spec.t_min;
  // Pick the divisor pair whose cells are closest to square.
  int best_nx = d, best_nt = 1;
  double best_score = std::numeric_limits<double>::infinity();
  for (int nx = 1; nx <= d; ++nx) {
    if (d % nx != 0)
      continue;
    const int nt = d / nx;
    const double score = std::abs(sx / nx - st / nt);
    if (score < best_score) {
      best_score = score;
      best_nx = nx;
      best_nt = nt;
    }
  }
  return {spec.x_min, spec.x_max, spec.t_min, spec.t_max, best_nx, best_nt};
}

namespace {

// Divisor pair of n nearest to a square, larger factor on the longer axis.
std::pair<int, int> grid_factors(int n, double span_x, double span_t) {
  int a = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (a > 1 && n % a != 0)
    --a;
  const int b = n / a;
  if (span_x >= span_t)
    return {std::max(a, b), std::min(a, b)};
  return {std::min(a, b), std::max(a, b)};
}

Point uniform_point(const ProblemSpec &spec,
                    const std::vector<double> &param_values,
                    std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> ux(spec.x_min, spec.x_max);
  std::uniform_real_distribution<double> ut(spec.t_min, spec.t_max);
  Point p;
  p.x = ux(rng);
  p.t = ut(rng);
  if (!param_values.empty()) {
    std::uniform_int_distribution<std::size_t> up(0, param_values.size() - 1);
    p.param = param_values[up(rng)];
  }
  return p;
}

int equation_count(const CollocationSet &C) {
  int n = 1;
  for (const Point &p : C.points)
    n = std::max(n, p.equation_index + 1);
  return n;
}

} // namespace

CollocationSet init_collocation(const ProblemSpec &spec, int n_per_param,
                                const std::vector<double> &param_values,
                                InitScheme scheme, std::uint64_t seed) {
  if (n_per_param < 1)
    throw std::invalid_argument("init_collocation: n_per_param < 1");
  CollocationSet C;
  const std::size_t reps = std::max<std::size_t>(1, param_values.size());
  C.budget = static_cast<std::size_t>(n_per_param) * reps;
  C.points.reserve(C.budget);
  std::mt19937_64 rng(seed);
  for (std::size_t pi = 0; pi < reps; ++pi) {
    std::optional<double> pv;
    if (!param_values.empty())
      pv = param_values[pi];
    if (scheme == InitScheme::equidistant) {
      const auto [gx, gt] = grid_factors(n_per_param, spec.x_max - spec.x_min,
                                         spec.t_max - spec.t_min);
      for (int j = 0; j < gt; ++j)
        for (int i = 0; i < gx; ++i) {
          Point p;
          p.x = spec.x_min + (spec.x_max - spec.x_min) * (i + 0.5) / gx;
          p.t = spec.t_min + (spec.t_max - spec.t_min) * (j + 0.5) / gt;
          p.param = pv;
          C.points.push_back(p);
        }
    } else {
      for (int i = 0; i < n_per_param; ++i) {
        Point p = uniform_point(spec, {}, rng);
        p.param = pv;
        C.points.push_back(p);
      }
    }
  }
  return C;
}

CollocationSet candidate_pool(const ProblemSpec &spec,
                              const CollocationSet &C,
                              const std::vector<double> &param_values,
                              std::mt19937_64 &rng) {
  CollocationSet pool;
  pool.budget = 10 * C.size();
  pool.points.reserve(pool.budget);
  const int n_eq = equation_count(C);
  for (std::size_t i = 0; i < 10 * C.size(); ++i) {
    Point p = uniform_point(spec, param_values, rng);
    p.equation_index = static_cast<int>(i % n_eq);
    pool.points.push_back(p);
  }
  return pool;
}

ResamplePlan fboal_step(const CollocationSet &C, const CollocationSet &pool,
                        const SubdomainGrid &grid,
                        const ResidualFn &residual_fn, int m) {
  ResamplePlan plan;
  if (m == 0 || C.points.empty())
    return plan;
  const int n_eq = equation_count(C);
  const int m_eq = std::max(1, m / n_eq);
  const std::vector<double> res_c = residual_fn(C.points);
  const std::vector<double> res_p = residual_fn(pool.points);

  for (int eq = 0; eq < n_eq; ++eq) {
    // Per-cell argmax over candidates (set A) and argmin over members
    // (set R); ties keep the earliest index.
    const int d = grid.cell_count();
    std::vector<std::ptrdiff_t> best_add(d, -1), best_rem(d, -1);
    for (std::size_t i = 0; i < pool.points.size(); ++i) {
      if (pool.points[i].equation_index != eq)
        continue;
      const int cell = grid.cell_of(pool.points[i].x, pool.points[i].t);
      if (best_add[cell] < 0 ||
          std::abs(res_p[i]) > std::abs(res_p[best_add[cell]]))
        best_add[cell] = static_cast<std::ptrdiff_t>(i);
    }
    for (std::size_t i = 0; i < C.points.size(); ++i) {
      if (C.points[i].equation_index != eq)
        continue;
      const int cell = grid.cell_of(C.points[i].x, C.points[i].t);
      if (best_rem[cell] < 0 ||
          std::abs(res_c[i]) < std::abs(res_c[best_rem[cell]]))
        best_rem[cell] = static_cast<std::ptrdiff_t>(i);
    }
    std::vector<std::ptrdiff_t> A, R;
    for (int cell = 0; cell < d; ++cell) {
      if (best_add[cell] >= 0)
        A.push_back(best_add[cell]);
      if (best_rem[cell] >= 0)
        R.push_back(best_rem[cell]);
    }
    std::sort(A.begin(), A.end(), [&](std::ptrdiff_t a, std::ptrdiff_t b) {
      const double ra = std::abs(res_p[a]), rb = std::abs(res_p[b]);
      return ra != rb ? ra > rb : a < b;
    });
    std::sort(R.begin(), R.end(), [&](std::ptrdiff_t a, std::ptrdiff_t b) {
      const double ra = std::abs(res_c[a]), rb = std::abs(res_c[b]);
      return ra != rb ? ra < rb : a < b;
    });
    const std::size_t swaps = std::min<std::size_t>(
        m_eq, std::min(A.size(), R.size()));
    if (swaps < static_cast<std::size_t>(m_eq))
      plan.clipped = true;
    for (std::size_t i = 0; i < swaps; ++i) {
      plan.added.push_back(pool.points[A[i]]);
      plan.removed.push_back(static_cast<std::size_t>(R[i]));
    }
  }
  return plan;
}

void apply_plan(CollocationSet &C, const ResamplePlan &plan) {
  std::vector<std::size_t> removed = plan.removed;
  std::sort(removed.begin(), removed.end(), std::greater<>());
  for (std::size_t idx : removed)
    C.points.erase(C.points.begin() + static_cast<std::ptrdiff_t>(idx));
  C.points.insert(C.points.end(), plan.added.begin(), plan.added.end());
}

std::vector<double> rad_weights(const std::vector<double> &residuals,
                                double kappa, double c) {
  std::vector<double> eps_k(residuals.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    eps_k[i] = std::pow(std::abs(residuals[i]), kappa);
    mean += eps_k[i];
  }
  mean /= std::max<std::size_t>(1, residuals.size());
  std::vector<double> w(residuals.size());
  if (mean == 0.0) {
    // All residuals vanish: the density degenerates, fall back to uniform.
    std::fill(w.begin(), w.end(), 1.0);
    return w;
  }
  for (std::size_t i = 0; i < residuals.size(); ++i)
    w[i] = eps_k[i] / mean + c;
  return w;
}

std::vector<std::size_t> sample_without_replacement(
    const std::vector<double> &weights, std::size_t n, std::mt19937_64 &rng) {
  n = std::min(n, weights.size());
  // Exponential-key scheme: key_i = Exp(1) / w_i, keep the n smallest.
  std::vector<std::pair<double, std::size_t>> keys(weights.size());
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double e = -std::log1p(-u01(rng));
    const double key = weights[i] > 0.0
                           ? e / weights[i]
                           : std::numeric_limits<double>::infinity();
    keys[i] = {key, i};
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n),
                    keys.end());
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = keys[i].second;
  return out;
}

CollocationSet rad_resample(const CollocationSet &C, const ProblemSpec &spec,
                            const std::vector<double> &param_values,
                            const ResidualFn &residual_fn, double kappa,
                            double c, int pool_factor, std::mt19937_64 &rng) {
  if (kappa < 0.0 || c < 0.0)
    throw std::invalid_argument("rad_resample: kappa and c must be >= 0");
  CollocationSet pool;
  pool.budget = static_cast<std::size_t>(pool_factor) * C.size();
  const int n_eq = equation_count(C);
  for (std::size_t i = 0; i < pool.budget; ++i) {
    Point p = uniform_point(spec, param_values, rng);
    p.equation_index = static_cast<int>(i % n_eq);
    pool.points.push_back(p);
  }
  const std::vector<double> w =
      rad_weights(residual_fn(pool.points), kappa, c);
  const std::vector<std::size_t> idx =
      sample_without_replacement(w, C.size(), rng);
  CollocationSet out;
  out.budget = C.budget;
  out.points.reserve(C.size());
  for (std::size_t i : idx)
    out.points.push_back(pool.points[i]);
  return out;
}

CollocationSet rard_add(const CollocationSet &C, const ProblemSpec &spec,
                        const std::vector<double> &param_values,
                        const ResidualFn &residual_fn, double kappa, double c,
                        int m_add, std::mt19937_64 &rng) {
  CollocationSet out = C;
  if (m_add == 0)
    return out;
  CollocationSet pool = candidate_pool(spec, C, param_values, rng);
  const std::vector<double> w =
      rad_weights(residual_fn(pool.points), kappa, c);
  for (std::size_t i : sample_without_replacement(
           w, static_cast<std::size_t>(m_add), rng))
    out.points.push_back(pool.points[i]);
  return out;
}

CollocationSet rar_add(const CollocationSet &C, const ProblemSpec &spec,
                       const std::vector<double> &param_values,
                       const ResidualFn &residual_fn, int m_add,
                       std::mt19937_64 &rng) {
  CollocationSet out = C;
  if (m_add == 0)
    return out;
  CollocationSet pool = candidate_pool(spec, C, param_values, rng);
  const std::vector<double> res = residual_fn(pool.points);
  std::vector<std::size_t> order(pool.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = std::abs(res[a]), rb = std::abs(res[b]);
    return ra != rb ? ra > rb : a < b;
  });
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(m_add), order.size());
  for (std::size_t i = 0; i < take; ++i)
    out.points.push_back(pool.points[order[i]]);
  return out;
}

CollocationSet split_per_equation(const CollocationSet &C, int n_equations) {
  if (n_equations < 1)
    throw std::invalid_argument("split_per_equation: n_equations < 1");
  CollocationSet out = C;
  for (std::size_t i = 0; i < out.points.size(); ++i)
    out.points[i].equation_index = static_cast<int>(i % n_equations);
  return out;
}

} // namespace fboal
