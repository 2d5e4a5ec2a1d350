#pragma once

#include "fboal/pde.hpp"

#include <vector>

namespace fboal {

struct EvalGrid {
  enum class Kind { test, validation };
  std::vector<double> x_nodes;
  std::vector<double> t_nodes;
  Kind kind = Kind::test;

  std::size_t size() const { return x_nodes.size() * t_nodes.size(); }
};

EvalGrid make_grid(const ProblemSpec &spec, int nx, int nt,
                   EvalGrid::Kind kind);

// Gauss-Hermite nodes and weights for the physicists' weight exp(-z^2).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// Burgers solution u(x, t) for u(x,0) = -sin(pi x) on [-1,1], evaluated by
// quadrature of the heat-kernel representation.  Throws when doubling the
// quadrature order still changes the value by more than 1e-6 relative.
double burgers_reference(double x, double t, double nu, int quad_order = 128);

// Closed-form wave solution: two sech pulses and their boundary images,
// each travelling at speed c = sqrt(c2).
double wave_exact(double x, double t, double c2, double l);

// Reference field sampled over a grid, row-major with x fastest.
std::vector<double> reference_field(const ProblemSpec &spec,
                                    const EvalGrid &grid, double pde_param,
                                    int quad_order = 128);

} // namespace fboal
