#include "fboal/oracle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fboal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Implicit-QL sweep on a symmetric tridiagonal matrix (d diagonal, e
// off-diagonal), rotating a single carried vector z instead of the full
// eigenvector matrix.  On return d holds the eigenvalues in ascending
// order and z the first components of the normalized eigenvectors.
void tridiag_ql(std::vector<double> &d, std::vector<double> &e,
                std::vector<double> &z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    for (int iter = 0;; ++iter) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-15 * dd)
          break;
      }
      if (m == l)
        break;
      if (iter == 50)
        throw std::runtime_error("tridiag_ql: no convergence");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i], b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (r == 0.0 && m - 1 >= l)
        continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k])
        k = j;
    std::swap(d[i], d[k]);
    std::swap(z[i], z[k]);
  }
}

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Hermite
// recurrence, weights come from the first eigenvector components.
GaussHermite compute_gauss_hermite(int n) {
  std::vector<double> d(n, 0.0), e(n - 1), z(n, 0.0);
  for (int j = 1; j < n; ++j)
    e[j - 1] = std::sqrt(j / 2.0);
  z[0] = 1.0;
  tridiag_ql(d, e, z);
  GaussHermite gh;
  gh.nodes = std::move(d);
  gh.weights.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int i = 0; i < n; ++i)
    gh.weights[i] = mu0 * z[i] * z[i];
  return gh;
}

const GaussHermite &cached_gauss_hermite(int n) {
  static std::mutex mtx;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

// One quadrature evaluation of the heat-kernel solution ratio.
double burgers_quad(double x, double t, double nu, const GaussHermite &gh) {
  // phi0(y) = exp(-cos(pi y) / (2 pi nu)) up to a constant factor; the
  // exponent is shifted by its maximum so the ratio never overflows.
  const double a = 2.0 * std::sqrt(nu * t);
  const double scale = 1.0 / (2.0 * kPi * nu);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double y = x - a * gh.nodes[i];
    const double f = std::exp(scale * (-std::cos(kPi * y) - 1.0));
    num += gh.weights[i] * gh.nodes[i] * f;
    den += gh.weights[i] * f;
  }
  return 2.0 * std::sqrt(nu / t) * num / den;
}

} // namespace

GaussHermite gauss_hermite(int n) { return cached_gauss_hermite(n); }

double burgers_reference(double x, double t, double nu, int quad_order) {
  if (t < 0.0 || nu <= 0.0)
    throw std::invalid_argument("burgers_reference: need t >= 0 and nu > 0");
  if (quad_order < 32)
    throw std::invalid_argument("burgers_reference: quad_order < 32");
  if (t < 1e-12)
    return -std::sin(kPi * x);
  const double u1 = burgers_quad(x, t, nu, cached_gauss_hermite(quad_order));
  const double u2 =
      burgers_quad(x, t, nu, cached_gauss_hermite(2 * quad_order));
  const double denom = std::max(1e-8, std::abs(u2));
  if (std::abs(u1 - u2) / denom > 1e-6)
    throw std::runtime_error(
        "burgers_reference: quadrature did not converge at x=" +
        std::to_string(x) + " t=" + std::to_string(t) +
        " nu=" + std::to_string(nu) + " (order " +
        std::to_string(quad_order) + " vs " + std::to_string(2 * quad_order) +
        ")");
  return u2;
}

double wave_exact(double x, double t, double c2, double l) {
  const double c = std::sqrt(c2);
  return 0.5 / std::cosh(2.0 * (x + c * t)) -
         0.5 / std::cosh(2.0 * (x - 2.0 * l + c * t)) +
         0.5 / std::cosh(2.0 * (x - c * t)) -
         0.5 / std::cosh(2.0 * (x + 2.0 * l - c * t));
}

EvalGrid make_grid(const ProblemSpec &spec, int nx, int nt,
                   EvalGrid::Kind kind) {
  if (nx < 2 || nt < 2)
    throw std::invalid_argument("make_grid: need nx, nt >= 2");
  EvalGrid g;
  g.kind = kind;
  g.x_nodes.resize(nx);
  g.t_nodes.resize(nt);
  for (int i = 0; i < nx; ++i)
    g.x_nodes[i] = spec.x_min + (spec.x_max - spec.x_min) * i / (nx - 1);
  for (int j = 0; j < nt; ++j)
    g.t_nodes[j] = spec.t_min + (spec.t_max - spec.t_min) * j / (nt - 1);
  return g;
}

std::vector<double> reference_field(const ProblemSpec &spec,
                                    const EvalGrid &grid, double pde_param,
                                    int quad_order) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid.t_nodes)
    for (double x : grid.x_nodes) {
      if (spec.kind == ProblemSpec::Kind::burgers)
        out.push_back(burgers_reference(x, t, pde_param, quad_order));
      else
        out.push_back(wave_exact(x, t, pde_param, spec.half_width()));
    }
  return out;
}

} // namespace fboal
