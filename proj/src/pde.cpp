#include "fboal/pde.hpp"

#include <cmath>

namespace fboal {

ProblemSpec ProblemSpec::burgers(double nu) {
  ProblemSpec s;
  s.kind = Kind::burgers;
  s.x_min = -1.0;
  s.x_max = 1.0;
  s.t_min = 0.0;
  s.t_max = 1.0;
  s.fixed_param = nu;
  s.transform = TransformKind::burgers_hard;
  s.w_ic = 0.0; // hard constraints leave only the residual loss
  s.w_bc = 0.0;
  return s;
}

ProblemSpec ProblemSpec::burgers_parameterized(double nu_lo, double nu_hi) {
  ProblemSpec s = burgers(0.5 * (nu_lo + nu_hi));
  s.param_range = {nu_lo, nu_hi};
  return s;
}

ProblemSpec ProblemSpec::wave(double c2) {
  ProblemSpec s;
  s.kind = Kind::wave;
  s.x_min = -4.0;
  s.x_max = 4.0;
  s.t_min = 0.0;
  s.t_max = 5.5;
  s.fixed_param = c2;
  s.transform = TransformKind::identity;
  s.w_ic = 1.0;
  s.w_bc = 1.0;
  return s;
}

ProblemSpec ProblemSpec::wave_parameterized(double c2_lo, double c2_hi) {
  ProblemSpec s = wave(0.5 * (c2_lo + c2_hi));
  s.param_range = {c2_lo, c2_hi};
  return s;
}

double wave_initial(double x, double l) {
  return 1.0 / std::cosh(2.0 * x) - 0.5 / std::cosh(2.0 * (x - 2.0 * l)) +
         0.5 / std::cosh(2.0 * (x + 2.0 * l));
}

double burgers_residual(const NetworkParams &params, const ProblemSpec &spec,
                        double x, double t, double nu) {
  return detail::residual_T<double>(spec, params.layer_sizes,
                                    plain_params(params), x, t, nu);
}

double wave_residual(const NetworkParams &params, const ProblemSpec &spec,
                     double x, double t, double c2) {
  return detail::residual_T<double>(spec, params.layer_sizes,
                                    plain_params(params), x, t, c2);
}

double residual(const NetworkParams &params, const ProblemSpec &spec,
                const Point &p) {
  return detail::residual_T<double>(spec, params.layer_sizes,
                                    plain_params(params), p.x, p.t,
                                    spec.point_param(p));
}

double pde_loss(const NetworkParams &params, const ProblemSpec &spec,
                const CollocationSet &C) {
  return detail::pde_loss_T<double>(spec, params.layer_sizes,
                                    plain_params(params), C.points);
}

std::pair<double, double> ic_bc_loss(const NetworkParams &params,
                                     const ProblemSpec &spec,
                                     const std::vector<Point> &ic_points,
                                     const std::vector<Point> &bc_points) {
  return detail::ic_bc_loss_T<double>(spec, params.layer_sizes,
                                      plain_params(params), ic_points,
                                      bc_points);
}

double predict(const NetworkParams &params, const ProblemSpec &spec, double x,
               double t, double pde_param) {
  const Dual2<double> u = detail::uhat_pass<double>(
      spec, params.layer_sizes, plain_params(params), x, t, pde_param, 0);
  return u.v;
}

double data_loss(const NetworkParams &params, const ProblemSpec &spec,
                 const std::vector<LabeledPoint> &labeled) {
  if (labeled.empty())
    return 0.0;
  double acc = 0.0;
  for (const LabeledPoint &lp : labeled) {
    const double p = predict(params, spec, lp.point.x, lp.point.t,
                             spec.point_param(lp.point));
    acc += (p - lp.label) * (p - lp.label);
  }
  return acc / static_cast<double>(labeled.size());
}

std::vector<Point> make_ic_points(const ProblemSpec &spec) {
  std::vector<Point> out;
  out.reserve(spec.n_ic);
  for (int i = 0; i < spec.n_ic; ++i) {
    Point p;
    p.x = spec.x_min +
          (spec.x_max - spec.x_min) * (i + 0.5) / spec.n_ic;
    p.t = spec.t_min;
    out.push_back(p);
  }
  return out;
}

std::vector<Point> make_bc_points(const ProblemSpec &spec) {
  std::vector<Point> out;
  out.reserve(spec.n_bc);
  for (int i = 0; i < spec.n_bc; ++i) {
    Point p;
    p.x = i % 2 == 0 ? spec.x_min : spec.x_max;
    p.t = spec.t_min +
          (spec.t_max - spec.t_min) * (i / 2 + 0.5) / ((spec.n_bc + 1) / 2);
    out.push_back(p);
  }
  return out;
}

} // namespace fboal
