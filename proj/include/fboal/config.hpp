#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fboal/pde.hpp"
#include "fboal/training.hpp"

namespace fboal {

// Experiment description as read from an INI-style config file.  A config
// covers one problem family, one (or several, via `compare`) samplers, and a
// list of seeds.  `make_problem` / `make_training` translate it into the
// structures the trainer consumes.
struct ExperimentConfig {
  // [problem]
  std::string problem = "burgers";
  bool parameterized = false;
  std::vector<double> values = {0.01};
  double w_ic = 1.0;
  double w_bc = 1.0;
  int n_ic = 512;
  int n_bc = 512;

  // [training]
  std::vector<int> layers = {50, 50, 50, 50};
  std::vector<LrStage> lr_stages = {{1e-3, 50000}, {1e-4, 200000},
                                    {1e-5, 200000}};
  long resample_period = 2000;
  int swap_count = 20;
  int subdomain_count = 200;
  int n_per_param = 1024;
  long cap = 500000;
  double threshold = 0.02;
  int test_nx = 10;
  int test_nt = 10;
  int validation_nx = 50;
  int validation_nt = 50;
  std::string init_scheme = "equidistant";

  // [sampler]
  std::string sampler = "fboal";
  std::vector<std::string> compare;
  double kappa = 1.0;
  double c = 1.0;
  int m_add = 5;

  // [run]
  std::vector<std::uint64_t> seeds = {0};
  double scale = 1.0;
  int jobs = 1;
  int threads = 1;
  std::string out = "out";

  static ExperimentConfig parse(const std::string &text);
  static ExperimentConfig load(const std::string &path);

  // Canonical form: parse(serialize()) reproduces the config exactly.
  std::string serialize() const;

  void validate() const;

  ProblemSpec make_problem(double value) const;
  TrainingConfig make_training(std::uint64_t seed) const;

  const std::string &out_dir_key() const { return out; }
};

ExperimentConfig preset(const std::string &name);
std::vector<std::string> preset_names();

} // namespace fboal
