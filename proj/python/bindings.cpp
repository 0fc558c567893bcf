#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infoflow/cli/commands.hpp"
#include "infoflow/error.hpp"

namespace py = pybind11;
using namespace infoflow;

namespace {

cli::RunConfig config_from(const std::string& json_text) {
  return cli::interpret(cli::resolve(cli::parse_config_text(json_text, "<python>")));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trace-distance non-Markovianity: native core";
  m.attr("__version__") = INFOFLOW_VERSION;

  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("trace_distance", [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return trace_distance(validate_density(a), validate_density(b));
  }, py::arg("rho1"), py::arg("rho2"));
  m.def("hilbert_schmidt_distance", [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return hilbert_schmidt_distance(validate_density(a), validate_density(b));
  }, py::arg("rho1"), py::arg("rho2"));
  m.def("relative_entropy", [](const ComplexMatrix& a, const ComplexMatrix& b) {
    return relative_entropy(validate_density(a), validate_density(b)).nats;
  }, py::arg("rho1"), py::arg("rho2"));

  m.def("jc_amplitude", [](double gamma0, double t, double lambda) {
    return models::jc_amplitude({gamma0, lambda}, t);
  }, py::arg("gamma0"), py::arg("t"), py::arg("lam") = 1.0);
  m.def("jc_rates", [](double gamma0, double t, double lambda) {
    const auto r = models::jc_rates({gamma0, lambda}, t);
    return py::make_tuple(r.gamma, r.shift);
  }, py::arg("gamma0"), py::arg("t"), py::arg("lam") = 1.0);
  m.def("jc_map", [](double gamma0, double t, double lambda) {
    return models::jc_map(models::jc_amplitude({gamma0, lambda}, t)).matrix();
  }, py::arg("gamma0"), py::arg("t"), py::arg("lam") = 1.0);
  m.def("dephasing_coherence", [](double omega, double t) {
    return models::dephasing_coherence({omega}, t);
  }, py::arg("omega"), py::arg("t"));
  m.def("lambda_rates", [](double gamma0, double delta1, double delta2, double t, bool extended_line) {
    models::QuadratureConfig q;
    q.extended_line = extended_line;
    const auto r = models::lambda_rates({gamma0, 1.0, delta1, delta2}, t, q);
    return py::make_tuple(r.gamma1, r.gamma2, r.shift1, r.shift2);
  }, py::arg("gamma0"), py::arg("delta1"), py::arg("delta2"), py::arg("t"), py::arg("extended_line") = false);

  m.def("resolve_config", [](const std::string& text) { return config_from(text).resolved.dump(); },
        py::arg("config_json"));
  m.def("trajectory_csv", [](const std::string& text) {
    const auto cfg = config_from(text);
    py::gil_scoped_release release;
    return cli::to_csv(cli::trajectory_table(cfg));
  }, py::arg("config_json"));
  m.def("measure_json", [](const std::string& text, std::size_t threads) {
    const auto cfg = config_from(text);
    py::gil_scoped_release release;
    return cli::dump_json(cli::measure_document(cfg, threads));
  }, py::arg("config_json"), py::arg("threads") = 1);
  m.def("sweep_csv", [](const std::string& text, std::size_t threads) {
    const auto cfg = config_from(text);
    py::gil_scoped_release release;
    return cli::to_csv(cli::sweep_table(cfg, threads, nullptr));
  }, py::arg("config_json"), py::arg("threads") = 1);
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
