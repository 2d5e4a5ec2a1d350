#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fboal/batch.hpp"
#include "fboal/experiment.hpp"
#include "fboal/oracle.hpp"
#include "fboal/training.hpp"

namespace py = pybind11;
using namespace fboal;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adaptive-collocation PINN trainer";

  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def_readwrite("x", &Point::x)
      .def_readwrite("t", &Point::t)
      .def_readwrite("param", &Point::param)
      .def_readwrite("equation_index", &Point::equation_index)
      .def("__repr__", [](const Point &p) {
        return "Point(x=" + std::to_string(p.x) + ", t=" + std::to_string(p.t) +
               ")";
      });

  py::class_<CollocationSet>(m, "CollocationSet")
      .def(py::init<>())
      .def_readwrite("points", &CollocationSet::points)
      .def_readwrite("budget", &CollocationSet::budget)
      .def("__len__", &CollocationSet::size);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def_static("burgers", &ProblemSpec::burgers, py::arg("nu"))
      .def_static("burgers_parameterized", &ProblemSpec::burgers_parameterized,
                  py::arg("nu_lo"), py::arg("nu_hi"))
      .def_static("wave", &ProblemSpec::wave, py::arg("c2"))
      .def_static("wave_parameterized", &ProblemSpec::wave_parameterized,
                  py::arg("c2_lo"), py::arg("c2_hi"))
      .def_readonly("x_min", &ProblemSpec::x_min)
      .def_readonly("x_max", &ProblemSpec::x_max)
      .def_readonly("t_min", &ProblemSpec::t_min)
      .def_readonly("t_max", &ProblemSpec::t_max);

  py::class_<NetworkParams>(m, "NetworkParams")
      .def_readwrite("flat", &NetworkParams::flat)
      .def_readonly("layer_sizes", &NetworkParams::layer_sizes)
      .def("n_params", &NetworkParams::n_params)
      .def("save", &NetworkParams::save, py::arg("path"))
      .def_static("load", &NetworkParams::load, py::arg("path"));

  m.def("init_network", &init_network, py::arg("layer_sizes"), py::arg("seed"));
  m.def("predict", &predict, py::arg("params"), py::arg("problem"),
        py::arg("x"), py::arg("t"), py::arg("pde_param"));

  py::enum_<SamplerKind>(m, "SamplerKind")
      .value("static_", SamplerKind::statik)
      .value("fboal", SamplerKind::fboal)
      .value("rad", SamplerKind::rad)
      .value("rard", SamplerKind::rard)
      .value("rar", SamplerKind::rar);

  py::enum_<InitScheme>(m, "InitScheme")
      .value("equidistant", InitScheme::equidistant)
      .value("uniform_random", InitScheme::uniform_random);

  py::class_<LrStage>(m, "LrStage")
      .def(py::init<double, long>(), py::arg("lr"), py::arg("iterations"))
      .def_readwrite("lr", &LrStage::lr)
      .def_readwrite("iterations", &LrStage::iterations);

  py::class_<TrainingConfig>(m, "TrainingConfig")
      .def(py::init<>())
      .def_readwrite("layer_sizes", &TrainingConfig::layer_sizes)
      .def_readwrite("lr_stages", &TrainingConfig::lr_stages)
      .def_readwrite("resample_period", &TrainingConfig::resample_period)
      .def_readwrite("swap_count", &TrainingConfig::swap_count)
      .def_readwrite("subdomain_count", &TrainingConfig::subdomain_count)
      .def_readwrite("n_per_param", &TrainingConfig::n_per_param)
      .def_readwrite("cap", &TrainingConfig::cap)
      .def_readwrite("threshold", &TrainingConfig::threshold)
      .def_readwrite("sampler", &TrainingConfig::sampler)
      .def_readwrite("kappa", &TrainingConfig::kappa)
      .def_readwrite("c", &TrainingConfig::c)
      .def_readwrite("m_add", &TrainingConfig::m_add)
      .def_readwrite("param_values", &TrainingConfig::param_values)
      .def_readwrite("init_scheme", &TrainingConfig::init_scheme)
      .def_readwrite("seed", &TrainingConfig::seed)
      .def_readwrite("test_nx", &TrainingConfig::test_nx)
      .def_readwrite("test_nt", &TrainingConfig::test_nt)
      .def_readwrite("n_threads", &TrainingConfig::n_threads);

  py::class_<ResampleEvent>(m, "ResampleEvent")
      .def_readonly("iteration", &ResampleEvent::iteration)
      .def_readonly("total_loss", &ResampleEvent::total_loss)
      .def_readonly("test_error", &ResampleEvent::test_error)
      .def_readonly("added", &ResampleEvent::added)
      .def_readonly("removed", &ResampleEvent::removed)
      .def_readonly("set_size", &ResampleEvent::set_size)
      .def_readonly("per_param_counts", &ResampleEvent::per_param_counts);

  py::class_<TrainingLog>(m, "TrainingLog")
      .def_readonly("loss_trace", &TrainingLog::loss_trace)
      .def_readonly("events", &TrainingLog::events)
      .def_readonly("stop_reason", &TrainingLog::stop_reason)
      .def_readonly("iterations", &TrainingLog::iterations)
      .def_readonly("resample_count", &TrainingLog::resample_count)
      .def_readonly("final_test_error", &TrainingLog::final_test_error)
      .def_readonly("wall_seconds", &TrainingLog::wall_seconds);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("params", &TrainResult::params)
      .def_readonly("log", &TrainResult::log)
      .def_readonly("colloc", &TrainResult::colloc);

  m.def("train", &train, py::arg("problem"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<BatchEvaluator>(m, "BatchEvaluator")
      .def(py::init<ProblemSpec, std::vector<int>, int>(), py::arg("problem"),
           py::arg("layer_sizes"), py::arg("n_threads") = 1)
      .def("residuals", &BatchEvaluator::residuals, py::arg("params"),
           py::arg("points"));

  m.def("init_collocation", &init_collocation, py::arg("problem"),
        py::arg("n_per_param"), py::arg("param_values"), py::arg("scheme"),
        py::arg("seed"));

  m.def("burgers_reference", &burgers_reference, py::arg("x"), py::arg("t"),
        py::arg("nu"), py::arg("quad_order") = 128);
  m.def("wave_exact", &wave_exact, py::arg("x"), py::arg("t"), py::arg("c2"),
        py::arg("l"));
  m.def("relative_l2", &relative_l2, py::arg("pred"), py::arg("ref"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("problem", &ExperimentConfig::problem)
      .def_readwrite("parameterized", &ExperimentConfig::parameterized)
      .def_readwrite("values", &ExperimentConfig::values)
      .def_readwrite("layers", &ExperimentConfig::layers)
      .def_readwrite("lr_stages", &ExperimentConfig::lr_stages)
      .def_readwrite("resample_period", &ExperimentConfig::resample_period)
      .def_readwrite("swap_count", &ExperimentConfig::swap_count)
      .def_readwrite("subdomain_count", &ExperimentConfig::subdomain_count)
      .def_readwrite("n_per_param", &ExperimentConfig::n_per_param)
      .def_readwrite("cap", &ExperimentConfig::cap)
      .def_readwrite("threshold", &ExperimentConfig::threshold)
      .def_readwrite("test_nx", &ExperimentConfig::test_nx)
      .def_readwrite("test_nt", &ExperimentConfig::test_nt)
      .def_readwrite("validation_nx", &ExperimentConfig::validation_nx)
      .def_readwrite("validation_nt", &ExperimentConfig::validation_nt)
      .def_readwrite("sampler", &ExperimentConfig::sampler)
      .def_readwrite("compare", &ExperimentConfig::compare)
      .def_readwrite("kappa", &ExperimentConfig::kappa)
      .def_readwrite("c", &ExperimentConfig::c)
      .def_readwrite("m_add", &ExperimentConfig::m_add)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("scale", &ExperimentConfig::scale)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_static("parse", &ExperimentConfig::parse, py::arg("text"))
      .def_static("load", &ExperimentConfig::load, py::arg("path"))
      .def("serialize", &ExperimentConfig::serialize)
      .def("validate", &ExperimentConfig::validate)
      .def("make_problem", &ExperimentConfig::make_problem, py::arg("value"))
      .def("make_training", &ExperimentConfig::make_training, py::arg("seed"));

  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", &preset_names);

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("sampler", &RunSummary::sampler)
      .def_readonly("value", &RunSummary::value)
      .def_readonly("seed", &RunSummary::seed)
      .def_readonly("validation_error", &RunSummary::validation_error)
      .def_readonly("iterations", &RunSummary::iterations)
      .def_readonly("resample_count", &RunSummary::resample_count)
      .def_readonly("stop_reason", &RunSummary::stop_reason)
      .def_readonly("wall_seconds", &RunSummary::wall_seconds)
      .def_readonly("skipped", &RunSummary::skipped);

  m.def(
      "run_experiment",
      [](const ExperimentConfig &cfg, const std::string &out_dir,
         bool resume) {
        std::vector<RunSummary> rows;
        int rc = 0;
        {
          py::gil_scoped_release release;
          rc = run_experiment(cfg, out_dir, resume, &rows);
        }
        return py::make_tuple(rc, rows);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("resume") = false);
  m.def("compare_samplers", &compare_samplers, py::arg("config"),
        py::arg("out_dir"), py::arg("resume") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("config"), py::arg("axis"),
        py::arg("axis_values"), py::arg("out_dir"), py::arg("resume") = false,
        py::call_guard<py::gil_scoped_release>());

  py::enum_<Axis>(m, "Axis").value("x", Axis::x).value("t", Axis::t);
  m.def("export_density", &export_density, py::arg("colloc_csv"),
        py::arg("axis"), py::arg("bins"), py::arg("out_csv"));
}
