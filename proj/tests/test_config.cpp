#include <doctest.h>

#include "fboal/config.hpp"

#include <stdexcept>

using namespace fboal;

TEST_CASE("serialize is a canonical fixed point of parse") {
  ExperimentConfig cfg;
  cfg.problem = "wave";
  cfg.parameterized = true;
  cfg.values = {1.0, 1.5, 3.0};
  cfg.layers = {32, 32};
  cfg.lr_stages = {{5e-3, 1000}, {5e-4, 2000}};
  cfg.sampler = "rard";
  cfg.compare = {"static", "fboal"};
  cfg.kappa = 2.0;
  cfg.c = 0.0;
  cfg.seeds = {1, 2, 3};
  cfg.scale = 0.25;
  cfg.out = "results";

  const std::string text = cfg.serialize();
  const ExperimentConfig back = ExperimentConfig::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.problem == "wave");
  CHECK(back.parameterized);
  CHECK(back.values == cfg.values);
  CHECK(back.layers == cfg.layers);
  CHECK(back.lr_stages.size() == 2);
  CHECK(back.lr_stages[1].lr == 5e-4);
  CHECK(back.lr_stages[1].iterations == 2000);
  CHECK(back.compare == cfg.compare);
  CHECK(back.seeds == cfg.seeds);
  CHECK(back.scale == 0.25);
  CHECK(back.out == "results");
}

TEST_CASE("parser handles comments, blanks, and rejects unknown keys") {
  const ExperimentConfig cfg = ExperimentConfig::parse(
      "# experiment\n"
      "[problem]\n"
      "kind = burgers   # fixed viscosity\n"
      "\n"
      "values = 0.01 0.02\n"
      "[run]\n"
      "seeds = 4 5\n");
  CHECK(cfg.problem == "burgers");
  CHECK(cfg.values == std::vector<double>{0.01, 0.02});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK_THROWS_AS(ExperimentConfig::parse("[problem]\nbogus = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[training]\nlr_stages = 0.001\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("no equals sign"),
                  std::invalid_argument);
}

TEST_CASE("validation rejects inconsistent configurations") {
  auto bad = [](auto &&mutate) {
    ExperimentConfig c;
    c.values = {0.01};
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  ExperimentConfig ok;
  ok.values = {0.01};
  CHECK_NOTHROW(ok.validate());

  bad([](ExperimentConfig &c) { c.problem = "heat"; });
  bad([](ExperimentConfig &c) { c.values = {}; });
  bad([](ExperimentConfig &c) { c.values = {0.01, -0.5}; });
  bad([](ExperimentConfig &c) { c.scale = 0.0; });
  bad([](ExperimentConfig &c) { c.scale = 1.5; });
  bad([](ExperimentConfig &c) { c.swap_count = 500; });
  bad([](ExperimentConfig &c) { c.threshold = 0.0; });
  bad([](ExperimentConfig &c) { c.sampler = "magic"; });
  bad([](ExperimentConfig &c) { c.compare = {"fboal", "magic"}; });
  bad([](ExperimentConfig &c) { c.lr_stages = {{1e-4, 10}, {1e-3, 10}}; });
  bad([](ExperimentConfig &c) { c.jobs = 0; });
}

TEST_CASE("presets pin the published experiment settings") {
  const ExperimentConfig s = preset("burgers-fixed-static");
  CHECK(s.sampler == "static");

  const ExperimentConfig f = preset("burgers-fixed-fboal");
  CHECK(f.sampler == "fboal");
  CHECK(f.swap_count == 20);
  CHECK(f.cap == 500000);
  CHECK(f.values.size() == 10);
  CHECK(f.values.front() == doctest::Approx(0.0025));
  CHECK(f.values.back() == doctest::Approx(0.0124));
  CHECK_NOTHROW(f.validate());

  const ExperimentConfig rd = preset("burgers-fixed-rard");
  CHECK(rd.sampler == "rard");
  CHECK(rd.kappa == 2.0);
  CHECK(rd.c == 0.0);
  CHECK(rd.m_add == 5);

  const ExperimentConfig p = preset("burgers-param");
  CHECK(p.parameterized);
  CHECK(p.values.size() == 40);
  CHECK(p.cap == 2000000);
  CHECK(p.swap_count == 200);

  const ExperimentConfig w = preset("wave-fixed");
  CHECK(w.problem == "wave");
  CHECK(w.subdomain_count == 196);
  CHECK(w.swap_count == 10);
  CHECK(w.threshold == 0.005);
  CHECK(w.values.size() == 11);

  for (const std::string &name : preset_names())
    CHECK_NOTHROW(preset(name).validate());
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
}

TEST_CASE("scale shrinks schedule and cap with ceiling rounding") {
  ExperimentConfig cfg;
  cfg.values = {0.01};
  cfg.layers = {16, 16};
  cfg.lr_stages = {{1e-3, 1000}, {1e-4, 3}};
  cfg.cap = 1001;
  cfg.scale = 0.1;
  cfg.parameterized = false;
  const TrainingConfig t = cfg.make_training(7);
  CHECK(t.layer_sizes == std::vector<int>{2, 16, 16, 1});
  CHECK(t.lr_stages[0].iterations == 100);
  CHECK(t.lr_stages[1].iterations == 1); // ceil(0.3)
  CHECK(t.cap == 101);                   // ceil(100.1)
  CHECK(t.threshold == 0.0); // early stop disabled in scaled runs
  CHECK(t.seed == 7);

  ExperimentConfig full = cfg;
  full.scale = 1.0;
  CHECK(full.make_training(0).threshold == full.threshold);

  ExperimentConfig par = cfg;
  par.parameterized = true;
  par.values = {0.0025, 0.0124};
  const TrainingConfig tp = par.make_training(0);
  CHECK(tp.layer_sizes.front() == 3);
  CHECK(tp.param_values == par.values);
}
