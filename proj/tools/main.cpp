#include "fboal/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  double scale = 0.0; // 0 = keep the config's value
  int jobs = 0;
  int threads = 0;
  std::vector<std::uint64_t> seed_list;
  std::string out;
  bool resume = false;
};

void add_common(CLI::App *cmd, CommonOpts &o) {
  cmd->add_option("--config", o.config_path, "Path to an experiment config");
  cmd->add_option("--preset", o.preset_name,
                  "Built-in experiment preset (alternative to --config)");
  cmd->add_option("--scale", o.scale,
                  "Multiply iteration stage lengths and the cap by this "
                  "factor in (0, 1]; below 1 the early-stop threshold "
                  "check is disabled");
  cmd->add_option("--jobs", o.jobs, "Parallel (value, seed) jobs");
  cmd->add_option("--threads", o.threads, "Worker threads per job");
  cmd->add_option("--seed-list", o.seed_list, "Seeds to run");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--resume", o.resume, "Skip seeds that already have artifacts");
}

int build_config(const CommonOpts &o, fboal::ExperimentConfig &cfg) {
  try {
    if (!o.config_path.empty())
      cfg = fboal::ExperimentConfig::load(o.config_path);
    else if (!o.preset_name.empty())
      cfg = fboal::preset(o.preset_name);
    else {
      std::cerr << "need --config or --preset\n";
      return fboal::kExitBadConfig;
    }
    if (o.scale > 0.0)
      cfg.scale = o.scale;
    if (o.jobs > 0)
      cfg.jobs = o.jobs;
    if (o.threads > 0)
      cfg.threads = o.threads;
    if (!o.seed_list.empty())
      cfg.seeds = o.seed_list;
    if (!o.out.empty())
      cfg.out = o.out;
    cfg.validate();
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return fboal::kExitBadConfig;
  }
  return fboal::kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Adaptive-collocation PINN trainer"};
  app.require_subcommand(1);

  CommonOpts run_o, cmp_o, sweep_o, dens_o;

  CLI::App *run_cmd = app.add_subcommand("run", "Run one experiment");
  add_common(run_cmd, run_o);

  CLI::App *cmp_cmd =
      app.add_subcommand("compare", "Run several samplers and tabulate");
  add_common(cmp_cmd, cmp_o);
  std::vector<std::string> cmp_samplers;
  cmp_cmd->add_option("--samplers", cmp_samplers,
                      "Samplers to compare (overrides the config)");

  CLI::App *sweep_cmd =
      app.add_subcommand("sweep", "Sweep one hyperparameter axis");
  add_common(sweep_cmd, sweep_o);
  std::string axis;
  std::vector<double> axis_values;
  sweep_cmd->add_option("--axis", axis, "Axis: m, k or d")->required();
  sweep_cmd->add_option("--values", axis_values, "Axis values");

  CLI::App *dens_cmd = app.add_subcommand(
      "export-density", "Histogram a collocation CSV along x or t");
  std::string colloc_csv, dens_out = "density.csv", dens_axis = "x";
  int bins = 40;
  dens_cmd->add_option("--input", colloc_csv, "Collocation CSV")->required();
  dens_cmd->add_option("--out", dens_out, "Output CSV");
  dens_cmd->add_option("--axis", dens_axis, "x or t");
  dens_cmd->add_option("--bins", bins, "Histogram bins");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    fboal::ExperimentConfig cfg;
    if (int rc = build_config(run_o, cfg))
      return rc;
    return fboal::run_experiment(cfg, cfg.out, run_o.resume);
  }
  if (cmp_cmd->parsed()) {
    fboal::ExperimentConfig cfg;
    if (int rc = build_config(cmp_o, cfg))
      return rc;
    if (!cmp_samplers.empty())
      cfg.compare = cmp_samplers;
    return fboal::compare_samplers(cfg, cfg.out, cmp_o.resume);
  }
  if (sweep_cmd->parsed()) {
    fboal::ExperimentConfig cfg;
    if (int rc = build_config(sweep_o, cfg))
      return rc;
    return fboal::sweep(cfg, axis, axis_values, cfg.out, sweep_o.resume);
  }
  if (dens_cmd->parsed()) {
    if (dens_axis != "x" && dens_axis != "t") {
      std::cerr << "export-density: axis must be x or t\n";
      return fboal::kExitBadConfig;
    }
    return fboal::export_density(
        colloc_csv, dens_axis == "x" ? fboal::Axis::x : fboal::Axis::t, bins,
        dens_out);
  }
  return fboal::kExitOk;
}
