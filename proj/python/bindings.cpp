#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgl/circuits.hpp"
#include "qgl/experiments.hpp"

namespace py = pybind11;

namespace {

qgl::LindbladSpec spec_from(const std::string& config_json) {
  return qgl::instance_spec(qgl::parse_config(config_json).instance);
}

py::dict report_dict(const qgl::Report& rep) {
  py::dict out;
  out["experiment"] = rep.experiment;
  out["columns"] = rep.columns;
  out["rows"] = rep.rows;
  out["failing"] = rep.failing;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermal-state preparation experiments";

  // Later registrations are tried first, so the subclass goes last.
  const auto base = py::register_exception<qgl::Error>(m, "QglError", PyExc_RuntimeError);
  py::register_exception<qgl::ConfigError>(m, "ConfigError", base);

  m.def("registered_experiments", &qgl::registered_experiments);
  m.def("experiment_columns", &qgl::experiment_columns, py::arg("experiment"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, bool timing) {
        const qgl::ExperimentConfig cfg = qgl::parse_config(config_json);
        qgl::Report rep;
        {
          py::gil_scoped_release release;
          rep = qgl::run_experiment(cfg, qgl::RunOptions{timing});
        }
        return report_dict(rep);
      },
      py::arg("config_json"), py::arg("timing") = false,
      "Runs the experiment described by a JSON config string.");

  m.def(
      "report_csv",
      [](const std::string& config_json) {
        const qgl::ExperimentConfig cfg = qgl::parse_config(config_json);
        py::gil_scoped_release release;
        return qgl::report_csv(qgl::run_experiment(cfg), false);
      },
      py::arg("config_json"), "CSV body without the timestamp line.");

  m.def(
      "gibbs_state", [](const std::string& config_json) { return spec_from(config_json).context.rho(); },
      py::arg("config_json"));

  m.def(
      "lindbladian",
      [](const std::string& config_json) { return qgl::build_lindbladian(spec_from(config_json)).dense(); },
      py::arg("config_json"), "Dense generator on row-major vec.");

  m.def(
      "fixed_point",
      [](const std::string& config_json) { return qgl::fixed_point(qgl::build_lindbladian(spec_from(config_json))); },
      py::arg("config_json"));

  m.def(
      "discriminant_proxy", [](const std::string& config_json) { return qgl::build_proxy(spec_from(config_json)); },
      py::arg("config_json"));

  m.def(
      "trace_distance", [](const qgl::Matrix& a, const qgl::Matrix& b) { return qgl::trace_distance(a, b); },
      py::arg("a"), py::arg("b"));
}
