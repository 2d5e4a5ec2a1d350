#include "fboal/training.hpp"

#include "fboal/metrics.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fboal {

std::string to_string(SamplerKind k) {
  switch (k) {
  case SamplerKind::statik: return "static";
  case SamplerKind::fboal: return "fboal";
  case SamplerKind::rad: return "rad";
  case SamplerKind::rard: return "rard";
  case SamplerKind::rar: return "rar";
  }
  return "static";
}

SamplerKind sampler_from_string(const std::string &s) {
  if (s == "static") return SamplerKind::statik;
  if (s == "fboal") return SamplerKind::fboal;
  if (s == "rad") return SamplerKind::rad;
  if (s == "rard") return SamplerKind::rard;
  if (s == "rar") return SamplerKind::rar;
  throw std::invalid_argument("unknown sampler: " + s);
}

void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &state, double lr) {
  if (params.size() != grads.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  for (double g : grads)
    if (!std::isfinite(g))
      throw std::runtime_error("adam_step: non-finite gradient");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step);
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] =
        state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

StopDecision stopping_check(double test_error, long iter,
                            const TrainingConfig &cfg) {
  if (test_error < cfg.threshold)
    return {true, "threshold_met"};
  if (iter >= cfg.cap)
    return {true, "cap_reached"};
  return {false, ""};
}

double test_error(const NetworkParams &params, const ProblemSpec &problem,
                  const EvalGrid &grid,
                  const std::vector<double> &param_values,
                  const std::vector<std::vector<double>> &reference_per_param) {
  const std::vector<double> values =
      param_values.empty() ? std::vector<double>{problem.fixed_param}
                           : param_values;
  double sum = 0.0;
  std::vector<double> pred;
  pred.reserve(grid.size());
  for (std::size_t pi = 0; pi < values.size(); ++pi) {
    pred.clear();
    for (double t : grid.t_nodes)
      for (double x : grid.x_nodes)
        pred.push_back(predict(params, problem, x, t, values[pi]));
    sum += relative_l2(pred, reference_per_param[pi]);
  }
  return sum;
}

TrainResult train(const ProblemSpec &problem, const TrainingConfig &cfg) {
  const auto t_start = std::chrono::steady_clock::now();

  std::vector<int> sizes = cfg.layer_sizes;
  if (sizes.empty())
    sizes = {problem.input_dim(), 50, 50, 50, 50, 1};
  if (sizes.front() != problem.input_dim())
    throw std::invalid_argument("train: input layer does not match problem");

  TrainResult result;
  result.params = init_network(sizes, cfg.seed);
  CollocationSet &C = result.colloc;
  // Collocation initialization uses a fixed stream so that re-seeded runs
  // only re-randomize the network, matching the multi-seed protocol.
  C = init_collocation(problem, cfg.n_per_param, cfg.param_values,
                       cfg.init_scheme, 12345);

  const SubdomainGrid grid = build_grid_d(problem, cfg.subdomain_count);
  const std::vector<Point> ic_points = make_ic_points(problem);
  const std::vector<Point> bc_points = make_bc_points(problem);

  BatchEvaluator evaluator(problem, sizes, cfg.n_threads);
  const ResidualFn residual_fn = [&](const std::vector<Point> &pts) {
    return evaluator.residuals(result.params, pts);
  };

  const EvalGrid test_grid =
      make_grid(problem, cfg.test_nx, cfg.test_nt, EvalGrid::Kind::test);
  const std::vector<double> values =
      cfg.param_values.empty() ? std::vector<double>{problem.fixed_param}
                               : cfg.param_values;
  std::vector<std::vector<double>> reference(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    reference[i] = reference_field(problem, test_grid, values[i],
                                   cfg.quad_order);

  std::mt19937_64 sampler_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  AdamState adam;
  std::vector<double> grad;
  TrainingLog &log = result.log;
  NetworkParams last_good = result.params;

  // The schedule may sum to less than the cap; the final rate then rides
  // until the cap is hit.
  std::vector<LrStage> stages = cfg.lr_stages;
  long scheduled = 0;
  for (const LrStage &stage : stages)
    scheduled += stage.iterations;
  if (!stages.empty() && scheduled < cfg.cap)
    stages.back().iterations += cfg.cap - scheduled;

  long iter = 0;
  bool stopped = false;
  for (const LrStage &stage : stages) {
    if (stopped)
      break;
    long done_in_stage = 0;
    while (done_in_stage < stage.iterations && !stopped) {
      const long block = std::min(cfg.resample_period,
                                  stage.iterations - done_in_stage);
      for (long i = 0; i < block; ++i) {
        const LossBreakdown loss = evaluator.loss_and_grad(
            result.params, C.points, ic_points, bc_points, grad);
        if (!std::isfinite(loss.total) || loss.total > 1e6) {
          result.params = last_good;
          log.stop_reason = "diverged";
          log.iterations = iter;
          const auto t_end = std::chrono::steady_clock::now();
          log.wall_seconds =
              std::chrono::duration<double>(t_end - t_start).count();
          return result;
        }
        last_good = result.params;
        adam_step(result.params.flat, grad, adam, stage.lr);
        log.loss_trace.push_back(loss.total);
        ++iter;
      }
      done_in_stage += block;

      // Resample boundary: evaluate test error, adapt the set, decide.
      const double err =
          test_error(result.params, problem, test_grid, cfg.param_values,
                     reference);
      ResampleEvent ev;
      ev.iteration = iter;
      ev.total_loss = log.loss_trace.back();
      ev.test_error = err;

      const StopDecision dec = stopping_check(err, iter, cfg);
      if (!dec.stop && cfg.sampler != SamplerKind::statik) {
        switch (cfg.sampler) {
        case SamplerKind::fboal: {
          const CollocationSet pool =
              candidate_pool(problem, C, cfg.param_values, sampler_rng);
          const ResamplePlan plan =
              fboal_step(C, pool, grid, residual_fn, cfg.swap_count);
          apply_plan(C, plan);
          ev.added = static_cast<int>(plan.added.size());
          ev.removed = static_cast<int>(plan.removed.size());
          break;
        }
        case SamplerKind::rad:
          C = rad_resample(C, problem, cfg.param_values, residual_fn,
                           cfg.kappa, cfg.c, 10, sampler_rng);
          ev.added = ev.removed = static_cast<int>(C.size());
          break;
        case SamplerKind::rard:
          C = rard_add(C, problem, cfg.param_values, residual_fn, cfg.kappa,
                       cfg.c, cfg.m_add, sampler_rng);
          ev.added = cfg.m_add;
          break;
        case SamplerKind::rar:
          C = rar_add(C, problem, cfg.param_values, residual_fn, cfg.m_add,
                      sampler_rng);
          ev.added = cfg.m_add;
          break;
        default:
          break;
        }
        ++log.resample_count;
      }
      ev.set_size = C.size();
      if (!cfg.param_values.empty()) {
        ev.per_param_counts.assign(cfg.param_values.size(), 0);
        for (const Point &p : C.points)
          for (std::size_t pi = 0; pi < cfg.param_values.size(); ++pi)
            if (p.param && *p.param == cfg.param_values[pi]) {
              ++ev.per_param_counts[pi];
              break;
            }
      }
      log.events.push_back(ev);
      log.final_test_error = err;

      if (dec.stop) {
        log.stop_reason = dec.reason;
        stopped = true;
      }
    }
  }
  if (!stopped)
    log.stop_reason = "cap_reached";

  log.iterations = iter;
  CollocationSnapshot snap;
  snap.iteration = iter;
  snap.points = C.points;
  log.snapshots.push_back(snap);
  const auto t_end = std::chrono::steady_clock::now();
  log.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
  return result;
}

} // namespace fboal
