#pragma once

#include "fboal/batch.hpp"
#include "fboal/oracle.hpp"
#include "fboal/sampling.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fboal {

enum class SamplerKind { statik, fboal, rad, rard, rar };

std::string to_string(SamplerKind k);
SamplerKind sampler_from_string(const std::string &s);

struct LrStage {
  double lr = 1e-3;
  long iterations = 0;
};

struct TrainingConfig {
  std::vector<int> layer_sizes; // filled from the problem if empty
  std::vector<LrStage> lr_stages = {{1e-3, 50000}, {1e-4, 200000},
                                    {1e-5, 200000}};
  long resample_period = 2000; // k
  int swap_count = 20;         // m (FBOAL)
  int subdomain_count = 200;   // d
  int n_per_param = 1024;      // collocation budget per parameter value
  long cap = 500000;           // K
  double threshold = 0.02;     // s
  SamplerKind sampler = SamplerKind::statik;
  double kappa = 1.0, c = 1.0; // RAD / RAR-D density
  int m_add = 5;               // RAR-D / RAR growth per event
  std::vector<double> param_values; // empty for non-parameterized runs
  InitScheme init_scheme = InitScheme::equidistant;
  std::uint64_t seed = 0;
  int test_nx = 10, test_nt = 10;
  int n_threads = 1;
  int quad_order = 128;
};

struct AdamState {
  std::vector<double> m, v;
  long step = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

// Standard bias-corrected Adam update, in place.
void adam_step(std::vector<double> &params, const std::vector<double> &grads,
               AdamState &state, double lr);

struct StopDecision {
  bool stop = false;
  std::string reason; // "cap_reached" or "threshold_met"
};

StopDecision stopping_check(double test_error, long iter,
                            const TrainingConfig &cfg);

struct ResampleEvent {
  long iteration = 0;
  double total_loss = 0.0;
  double test_error = 0.0;
  int added = 0, removed = 0;
  std::size_t set_size = 0;
  // Point count per training parameter value, in cfg.param_values order;
  // empty for non-parameterized runs.
  std::vector<std::size_t> per_param_counts;
};

struct CollocationSnapshot {
  long iteration = 0;
  std::vector<Point> points;
};

struct TrainingLog {
  std::vector<double> loss_trace; // per iteration
  std::vector<ResampleEvent> events;
  std::vector<CollocationSnapshot> snapshots;
  std::string stop_reason;
  long iterations = 0;
  int resample_count = 0;
  double final_test_error = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  NetworkParams params;
  TrainingLog log;
  CollocationSet colloc;
};

TrainResult train(const ProblemSpec &problem, const TrainingConfig &cfg);

// Relative L2 test error on the reference grid; parameterized mode sums
// per-parameter errors (the stopping rule compares that sum against s).
double test_error(const NetworkParams &params, const ProblemSpec &problem,
                  const EvalGrid &grid,
                  const std::vector<double> &param_values,
                  const std::vector<std::vector<double>> &reference_per_param);

} // namespace fboal
