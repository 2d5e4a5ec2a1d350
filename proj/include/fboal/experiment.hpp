#pragma once

#include "fboal/config.hpp"
#include "fboal/metrics.hpp"

#include <string>
#include <vector>

namespace fboal {

// Exit statuses shared by the CLI verbs.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitDiverged = 3;

struct RunSummary {
  std::string sampler;
  double value = 0.0;
  std::uint64_t seed = 0;
  double validation_error = 0.0;
  long iterations = 0;
  int resample_count = 0;
  std::string stop_reason;
  double wall_seconds = 0.0;
  bool skipped = false; // already on disk, left untouched by --resume
};

// Runs every (value, seed) job of the config under out_dir/<sampler>/ and
// writes the artifact tree: per-run log.jsonl, summary.json, timing.json,
// collocation CSV and density CSV, plus a consolidated summary.csv.  With
// resume = true, jobs whose summary.json already exists are skipped.
int run_experiment(const ExperimentConfig &cfg, const std::string &out_dir,
                   bool resume, std::vector<RunSummary> *collected = nullptr);

// Runs the config once per sampler in cfg.compare and writes
// out_dir/comparison.csv with one aggregated row per sampler.
int compare_samplers(const ExperimentConfig &cfg, const std::string &out_dir,
                     bool resume);

// Reruns the config once per axis value (axis: m, k or d) and writes a
// consolidated sweep.csv.  An empty value list is a no-op.
int sweep(const ExperimentConfig &cfg, const std::string &axis,
          const std::vector<double> &axis_values, const std::string &out_dir,
          bool resume);

// Reads a collocation CSV and writes a histogram CSV (bin_edge, density).
int export_density(const std::string &colloc_csv, Axis axis, int bins,
                   const std::string &out_csv);

} // namespace fboal
