#include "fboal/experiment.hpp"

#include "fboal/oracle.hpp"
#include "fboal/training.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fboal {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_colloc_csv(const fs::path &path,
                      const std::vector<CollocationSnapshot> &snaps) {
  std::ostringstream out;
  out.precision(17);
  out << "x,t,param,equation_index,iteration\n";
  for (const CollocationSnapshot &s : snaps)
    for (const Point &p : s.points)
      out << p.x << ',' << p.t << ',' << (p.param ? *p.param : 0.0) << ','
          << p.equation_index << ',' << s.iteration << '\n';
  write_text(path, out.str());
}

void write_density_csv(const fs::path &path, const Histogram &h) {
  std::ostringstream out;
  out.precision(17);
  out << "bin_edge,density\n";
  for (std::size_t i = 0; i + 1 < h.edges.size(); ++i)
    out << h.edges[i] << ',' << h.density[i] << '\n';
  out << h.edges.back() << ",0\n";
  write_text(path, out.str());
}

struct Job {
  double value = 0.0;
  std::uint64_t seed = 0;
  fs::path dir;
};

double validation_error(const TrainResult &res, const ExperimentConfig &cfg,
                        const ProblemSpec &spec, double value) {
  const EvalGrid grid = make_grid(spec, cfg.validation_nx, cfg.validation_nt,
                                  EvalGrid::Kind::validation);
  // Parameterized runs report the sum of per-value errors, matching the
  // stopping rule; fixed runs report the single value.
  const std::vector<double> values =
      cfg.parameterized ? cfg.values : std::vector<double>{value};
  double total = 0.0;
  for (double v : values) {
    const std::vector<double> ref = reference_field(spec, grid, v);
    std::vector<double> pred;
    pred.reserve(ref.size());
    for (double t : grid.t_nodes)
      for (double x : grid.x_nodes)
        pred.push_back(predict(res.params, spec, x, t, v));
    total += relative_l2(pred, ref);
  }
  return total;
}

RunSummary execute_job(const ExperimentConfig &cfg, const Job &job) {
  const ProblemSpec spec = cfg.make_problem(job.value);
  TrainingConfig tcfg = cfg.make_training(job.seed);
  const TrainResult res = train(spec, tcfg);

  RunSummary s;
  s.sampler = cfg.sampler;
  s.value = job.value;
  s.seed = job.seed;
  s.validation_error = validation_error(res, cfg, spec, job.value);
  s.iterations = res.log.iterations;
  s.resample_count = res.log.resample_count;
  s.stop_reason = res.log.stop_reason;
  s.wall_seconds = res.log.wall_seconds;

  fs::create_directories(job.dir);

  std::ostringstream events;
  events << json{{"format", "fboal-log v1"},
                 {"sampler", cfg.sampler},
                 {"value", job.value},
                 {"seed", job.seed}}
                .dump()
         << '\n';
  for (const ResampleEvent &e : res.log.events)
    events << json{{"iteration", e.iteration},
                   {"total_loss", e.total_loss},
                   {"test_error", e.test_error},
                   {"added", e.added},
                   {"removed", e.removed},
                   {"set_size", e.set_size}}
                  .dump()
           << '\n';
  write_text(job.dir / "log.jsonl", events.str());

  write_colloc_csv(job.dir / "collocation.csv", res.log.snapshots);

  const Histogram hx =
      point_density(res.colloc.points, Axis::x, 40, spec.x_min, spec.x_max);
  write_density_csv(job.dir / "density_x.csv", hx);

  res.params.save((job.dir / "network.txt").string());

  write_text(job.dir / "timing.json",
             json{{"format", "fboal-timing v1"},
                  {"wall_seconds", res.log.wall_seconds}}
                 .dump(2) +
                 "\n");

  // summary.json carries everything reproducible; wall time lives in the
  // timing sidecar so identical runs produce identical summaries.
  write_text(job.dir / "summary.json",
             json{{"format", "fboal-summary v1"},
                  {"sampler", cfg.sampler},
                  {"value", job.value},
                  {"seed", job.seed},
                  {"validation_error", s.validation_error},
                  {"final_test_error", res.log.final_test_error},
                  {"iterations", s.iterations},
                  {"resample_count", s.resample_count},
                  {"set_size", res.colloc.points.size()},
                  {"stop_reason", s.stop_reason}}
                 .dump(2) +
                 "\n");
  return s;
}

RunSummary read_summary(const fs::path &dir) {
  std::ifstream in(dir / "summary.json");
  json j = json::parse(in);
  RunSummary s;
  s.sampler = j["sampler"];
  s.value = j["value"];
  s.seed = j["seed"];
  s.validation_error = j["validation_error"];
  s.iterations = j["iterations"];
  s.resample_count = j["resample_count"];
  s.stop_reason = j["stop_reason"];
  std::ifstream tin(dir / "timing.json");
  if (tin)
    s.wall_seconds = json::parse(tin).value("wall_seconds", 0.0);
  s.skipped = true;
  return s;
}

void write_summary_csv(const fs::path &path,
                       const std::vector<RunSummary> &rows) {
  std::ostringstream out;
  out.precision(17);
  out << "sampler,value,seed,validation_error,iterations,resample_count,"
         "stop_reason,wall_seconds\n";
  for (const RunSummary &r : rows)
    out << r.sampler << ',' << r.value << ',' << r.seed << ','
        << r.validation_error << ',' << r.iterations << ','
        << r.resample_count << ',' << r.stop_reason << ',' << r.wall_seconds
        << '\n';
  write_text(path, out.str());
}

} // namespace

int run_experiment(const ExperimentConfig &cfg, const std::string &out_dir,
                   bool resume, std::vector<RunSummary> *collected) {
  try {
    cfg.validate();
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  const fs::path root = fs::path(out_dir) / cfg.sampler;
  fs::create_directories(root);
  write_text(root / "config.ini", cfg.serialize());

  std::vector<Job> jobs;
  // A parameterized run trains one network for all values; fixed-parameter
  // runs train one network per value.
  const std::vector<double> run_values =
      cfg.parameterized ? std::vector<double>{cfg.values.front()} : cfg.values;
  for (double v : run_values)
    for (std::uint64_t seed : cfg.seeds)
      jobs.push_back({v, seed,
                      root / (cfg.parameterized
                                  ? std::string("param")
                                  : "value_" + value_label(v)) /
                          ("seed_" + std::to_string(seed))});

  std::vector<RunSummary> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> diverged{false};
  std::mutex log_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size())
        return;
      const Job &job = jobs[i];
      if (resume && fs::exists(job.dir / "summary.json")) {
        rows[i] = read_summary(job.dir);
        continue;
      }
      rows[i] = execute_job(cfg, job);
      if (rows[i].stop_reason == "diverged")
        diverged = true;
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << cfg.sampler << " value=" << job.value
                << " seed=" << job.seed << " error=" << std::scientific
                << rows[i].validation_error << std::defaultfloat << " ("
                << rows[i].stop_reason << ")\n";
    }
  };

  const int n_workers =
      std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w)
    pool.emplace_back(worker);
  worker();
  for (auto &th : pool)
    th.join();

  write_summary_csv(root / "summary.csv", rows);
  if (collected)
    collected->insert(collected->end(), rows.begin(), rows.end());
  return diverged ? kExitDiverged : kExitOk;
}

int compare_samplers(const ExperimentConfig &cfg, const std::string &out_dir,
                     bool resume) {
  if (cfg.compare.size() < 2) {
    std::cerr << "compare: need at least 2 samplers\n";
    return kExitBadConfig;
  }
  std::ostringstream out;
  out.precision(17);
  out << "sampler,geo_mean_error,error_std,mean_iterations,"
         "mean_resample_count,mean_wall_seconds\n";
  int status = kExitOk;
  for (const std::string &sampler : cfg.compare) {
    ExperimentConfig sub = cfg;
    sub.sampler = sampler;
    std::vector<RunSummary> rows;
    const int rc = run_experiment(sub, out_dir, resume, &rows);
    if (rc == kExitBadConfig)
      return rc;
    if (rc != kExitOk)
      status = rc;
    std::vector<double> errs;
    double it_sum = 0.0, rs_sum = 0.0, wall_sum = 0.0;
    for (const RunSummary &r : rows) {
      errs.push_back(r.validation_error);
      it_sum += static_cast<double>(r.iterations);
      rs_sum += r.resample_count;
      wall_sum += r.wall_seconds;
    }
    const auto [geo, sd] = aggregate_runs(errs);
    const double n = static_cast<double>(rows.size());
    out << sampler << ',' << geo << ',' << sd << ',' << it_sum / n << ','
        << rs_sum / n << ',' << wall_sum / n << '\n';
  }
  write_text(fs::path(out_dir) / "comparison.csv", out.str());
  return status;
}

int sweep(const ExperimentConfig &cfg, const std::string &axis,
          const std::vector<double> &axis_values, const std::string &out_dir,
          bool resume) {
  if (axis != "m" && axis != "k" && axis != "d") {
    std::cerr << "sweep: axis must be m, k or d\n";
    return kExitBadConfig;
  }
  if (axis_values.empty())
    return kExitOk;
  std::ostringstream out;
  out.precision(17);
  out << "axis,axis_value,geo_mean_error,error_std,mean_resample_count\n";
  int status = kExitOk;
  for (double av : axis_values) {
    ExperimentConfig sub = cfg;
    if (axis == "m")
      sub.swap_count = static_cast<int>(av);
    else if (axis == "k")
      sub.resample_period = static_cast<long>(av);
    else
      sub.subdomain_count = static_cast<int>(av);
    const std::string sub_out =
        (fs::path(out_dir) / (axis + "_" + value_label(av))).string();
    std::vector<RunSummary> rows;
    const int rc = run_experiment(sub, sub_out, resume, &rows);
    if (rc == kExitBadConfig)
      return rc;
    if (rc != kExitOk)
      status = rc;
    std::vector<double> errs;
    double rs_sum = 0.0;
    for (const RunSummary &r : rows) {
      errs.push_back(r.validation_error);
      rs_sum += r.resample_count;
    }
    const auto [geo, sd] = aggregate_runs(errs);
    out << axis << ',' << av << ',' << geo << ',' << sd << ','
        << rs_sum / static_cast<double>(rows.size()) << '\n';
  }
  write_text(fs::path(out_dir) / "sweep.csv", out.str());
  return status;
}

int export_density(const std::string &colloc_csv, Axis axis, int bins,
                   const std::string &out_csv) {
  std::ifstream in(colloc_csv);
  if (!in) {
    std::cerr << "export-density: cannot open " << colloc_csv << '\n';
    return kExitBadConfig;
  }
  std::string line;
  std::getline(in, line); // header
  std::vector<Point> points;
  long max_iter = -1;
  std::vector<long> iters;
  std::vector<Point> all;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    Point p;
    long iter = 0;
    double param = 0.0;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    if (!(row >> p.x >> p.t >> param >> p.equation_index >> iter)) {
      std::cerr << "export-density: bad row: " << line << '\n';
      return kExitBadConfig;
    }
    p.param = param;
    all.push_back(p);
    iters.push_back(iter);
    max_iter = std::max(max_iter, iter);
  }
  if (all.empty()) {
    std::cerr << "export-density: no points in " << colloc_csv << '\n';
    return kExitBadConfig;
  }
  // Only the last snapshot matters for the final density plot.
  for (std::size_t i = 0; i < all.size(); ++i)
    if (iters[i] == max_iter)
      points.push_back(all[i]);
  double lo = axis == Axis::x ? points.front().x : points.front().t;
  double hi = lo;
  for (const Point &p : points) {
    const double v = axis == Axis::x ? p.x : p.t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo)
    hi = lo + 1.0;
  write_density_csv(out_csv, point_density(points, axis, bins, lo, hi));
  return kExitOk;
}

} // namespace fboal
