#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rescomp/scenario.hpp"

namespace py = pybind11;
using namespace rescomp;

namespace {

// Documents cross the boundary as JSON text; the Python wrapper converts
// to and from dicts with the json module.
std::string run(const std::string& text, std::optional<uint64_t> seed, std::optional<double> gap) {
  RunOptions o;
  o.seed = seed;
  o.gap = gap;
  const Json scenario = Json::parse(text);
  py::gil_scoped_release release;
  return run_scenario(scenario, o).dump();
}

std::string divergence(const std::string& quantity, const Matrix& rho, const std::string& set_text, double epsilon) {
  const auto set = parse_set(Json::parse(set_text));
  py::gil_scoped_release release;
  if (quantity == "relative_entropy") return to_json(rel_entropy_of_resource(rho, set)).dump();
  if (quantity == "dmax") return to_json(dmax(rho, set)).dump();
  if (quantity == "hypothesis") return to_json(hypothesis_testing(rho, set, epsilon)).dump();
  throw std::invalid_argument("unknown quantity '" + quantity + "'");
}

}  // namespace

PYBIND11_MODULE(_rescomp, m) {
  m.doc() = "Native core of the rescomp toolkit.";
  static py::exception<SchemaError> schema_error(m, "SchemaError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SchemaError& e) {
      py::set_error(schema_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(schema_error, e.what());
    }
  });

  m.def("version", &toolkit_version);
  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("builtin_scenario", [](const std::string& name) { return builtin_scenario(name).dump(); });
  m.def("schema", &scenario_schema_text);
  m.def("validate", [](const std::string& text) { validate_scenario(Json::parse(text)); });
  m.def("run", &run, py::arg("text"), py::arg("seed") = py::none(), py::arg("gap") = py::none());
  m.def("divergence", &divergence, py::arg("quantity"), py::arg("rho"), py::arg("set"), py::arg("epsilon") = 0.1);
}
