#include <doctest.h>

#include "fboal/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fboal;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("fboal-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int &counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig micro_config() {
  ExperimentConfig cfg;
  cfg.problem = "burgers";
  cfg.values = {0.05};
  cfg.layers = {8, 8};
  cfg.lr_stages = {{1e-3, 60}};
  cfg.resample_period = 30;
  cfg.cap = 60;
  cfg.threshold = 1e-9;
  cfg.n_per_param = 32;
  cfg.subdomain_count = 8;
  cfg.swap_count = 2;
  cfg.test_nx = 3;
  cfg.test_nt = 3;
  cfg.validation_nx = 4;
  cfg.validation_nt = 4;
  cfg.sampler = "fboal";
  cfg.seeds = {0};
  return cfg;
}

} // namespace

TEST_CASE("a run leaves the full artifact tree and resume skips it") {
  TempDir tmp;
  ExperimentConfig cfg = micro_config();
  std::vector<RunSummary> collected;
  const int rc = run_experiment(cfg, tmp.path.string(), false, &collected);
  CHECK(rc == kExitOk);
  REQUIRE(collected.size() == 1);
  CHECK(collected[0].sampler == "fboal");
  CHECK(collected[0].iterations == 60);
  CHECK(!collected[0].skipped);
  CHECK(collected[0].validation_error > 0.0);

  const fs::path run_dir =
      tmp.path / "fboal" / "value_0.05" / "seed_0";
  for (const char *name : {"log.jsonl", "summary.json", "timing.json",
                           "collocation.csv", "density_x.csv", "network.txt"})
    CHECK_MESSAGE(fs::exists(run_dir / name), name);
  CHECK(fs::exists(tmp.path / "fboal" / "summary.csv"));
  CHECK(slurp(run_dir / "collocation.csv")
            .starts_with("x,t,param,equation_index,iteration"));
  CHECK(slurp(run_dir / "density_x.csv").starts_with("bin_edge,density"));

  const std::string before = slurp(run_dir / "summary.json");
  std::vector<RunSummary> again;
  CHECK(run_experiment(cfg, tmp.path.string(), true, &again) == kExitOk);
  REQUIRE(again.size() == 1);
  CHECK(again[0].skipped);
  CHECK(slurp(run_dir / "summary.json") == before);
}

TEST_CASE("sampler comparison writes one aggregated row per sampler") {
  TempDir tmp;
  ExperimentConfig cfg = micro_config();
  cfg.compare = {"static", "fboal"};
  CHECK(compare_samplers(cfg, tmp.path.string(), false) == kExitOk);
  const std::string csv = slurp(tmp.path / "comparison.csv");
  CHECK(csv.find("static") != std::string::npos);
  CHECK(csv.find("fboal") != std::string::npos);
  // header + two sampler rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("density export histograms the final snapshot only") {
  TempDir tmp;
  const fs::path csv = tmp.path / "colloc.csv";
  {
    std::ofstream out(csv);
    out << "x,t,param,equation_index,iteration\n";
    // stale snapshot at iteration 10, superseded at iteration 20
    out << "-0.9,0.1,0,0,10\n";
    out << "0.25,0.5,0,0,20\n";
    out << "0.25,0.6,0,0,20\n";
    out << "-0.75,0.4,0,0,20\n";
  }
  const fs::path hist = tmp.path / "density.csv";
  CHECK(export_density(csv.string(), Axis::x, 4, hist.string()) == kExitOk);
  std::ifstream in(hist);
  std::string header;
  std::getline(in, header);
  CHECK(header == "bin_edge,density");
  std::vector<double> edge, dens;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double e, d;
    char comma;
    ls >> e >> comma >> d;
    edge.push_back(e);
    dens.push_back(d);
  }
  // 4 bins plus the closing edge row, which carries zero density
  REQUIRE(dens.size() == 5);
  CHECK(dens.back() == 0.0);
  double sum = 0.0;
  for (double d : dens)
    sum += d;
  CHECK(sum == doctest::Approx(1.0));
  // bins span the surviving snapshot, [-0.75, 0.25]; the iteration-10
  // point at x = -0.9 must not contribute
  CHECK(edge.front() == doctest::Approx(-0.75));
  CHECK(edge.back() == doctest::Approx(0.25));
  CHECK(dens[0] == doctest::Approx(1.0 / 3.0));
  CHECK(dens[3] == doctest::Approx(2.0 / 3.0));
  CHECK(export_density("/nonexistent/file.csv", Axis::x, 4, hist.string()) !=
        kExitOk);
}

TEST_CASE("invalid configurations are refused with the config exit status") {
  TempDir tmp;
  ExperimentConfig cfg = micro_config();
  cfg.sampler = "bogus";
  CHECK(run_experiment(cfg, tmp.path.string(), false, nullptr) ==
        kExitBadConfig);
}
