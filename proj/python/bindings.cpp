// Documents cross the boundary as JSON text; the Python package turns them
// into dicts so results match the CLI output exactly.

#include <span>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maxent/errors.hpp"
#include "maxent/expansion.hpp"
#include "maxent/json_io.hpp"
#include "maxent/oracle.hpp"
#include "maxent/problem.hpp"

namespace py = pybind11;
using namespace maxent;

namespace {

Normalization normalized(const std::string& problem, bool drop_dependent, double tolerance) {
  LoadOptions load;
  load.drop_dependent = drop_dependent;
  return normalize(load_problem(problem, load), tolerance);
}

std::vector<double> checked_rho(const std::vector<double>& rho, bool raw, const AffineTransform* transform, int k) {
  if (static_cast<int>(rho.size()) != k) {
    throw DataError("rho has " + std::to_string(rho.size()) + " entries, expected k=" + std::to_string(k));
  }
  if (!raw) return rho;
  if (!transform) throw DataError("raw rho needs a table with a stored transform");
  return map_constraints(*transform, rho);
}

std::string normalize_doc(const std::string& problem, bool drop_dependent, double tolerance) {
  return dump_json(to_json(normalized(problem, drop_dependent, tolerance)));
}

std::string expand_doc(const std::string& problem, int order, const std::string& basis, bool drop_dependent,
                       double tolerance) {
  if (order < 1 || order > 64) throw DataError("order must be in 1..64");
  const Normalization n = normalized(problem, drop_dependent, tolerance);
  return dump_json(to_json(expand(n.problem, parse_basis(basis), order), &n.transform));
}

std::string evaluate_doc(const std::string& table, const std::vector<double>& rho, bool raw) {
  const StoredTable stored = table_from_json(parse_json(table));
  const auto x = checked_rho(rho, raw, stored.transform ? &*stored.transform : nullptr, stored.table.variables);
  Json values = Json::array();
  for (const auto& [index, value] : evaluate(stored.table, x)) values.push_back(Json{{"output", index}, {"value", value}});
  return dump_json(Json{{"rho", x}, {"values", values}});
}

std::string solve_doc(const std::string& problem, const std::vector<double>& rho, bool raw, double tolerance) {
  const Normalization n = normalized(problem, false, kDefaultSingularTolerance);
  const auto x = checked_rho(rho, raw, &n.transform, n.problem.k());
  SolveOptions opts;
  opts.tolerance = tolerance;
  Json doc = to_json(solve_exact(n.problem, x, opts));
  doc["rho"] = x;
  return dump_json(doc);
}

std::string trees_doc(const std::string& problem, int output, const std::vector<int>& index, const std::string& basis) {
  const Normalization n = normalized(problem, false, kDefaultSingularTolerance);
  if (static_cast<int>(index.size()) != n.problem.k()) {
    throw DataError("index has " + std::to_string(index.size()) + " entries, expected k=" + std::to_string(n.problem.k()));
  }
  for (int a : index)
    if (a < 0) throw DataError("index entries must be nonnegative");
  return dump_json(to_json(coefficient_report(n.problem, parse_basis(basis), output, MultiIndex(std::span<const int>(index)))));
}

std::string verify_doc(const std::string& problem, int order, const std::string& basis, const std::vector<double>& radii,
                       int samples, std::uint64_t seed, int threads) {
  if (order < 1 || order > 64) throw DataError("order must be in 1..64");
  const Normalization n = normalized(problem, false, kDefaultSingularTolerance);
  VerifyOptions opts;
  opts.radii = radii;
  opts.samples = samples;
  opts.seed = seed;
  opts.threads = threads;
  py::gil_scoped_release release;
  return dump_json(to_json(verify_series(n.problem, expand(n.problem, parse_basis(basis), order), opts)));
}

}  // namespace

PYBIND11_MODULE(_maxent, m) {
  m.doc() = "Native core of the maxent package; functions take and return JSON text.";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("normalize", &normalize_doc, py::arg("problem"), py::arg("drop_dependent") = false,
        py::arg("tolerance") = kDefaultSingularTolerance);
  m.def("expand", &expand_doc, py::arg("problem"), py::arg("order") = kDefaultOrder, py::arg("basis") = "moment",
        py::arg("drop_dependent") = false, py::arg("tolerance") = kDefaultSingularTolerance);
  m.def("evaluate", &evaluate_doc, py::arg("table"), py::arg("rho"), py::arg("raw") = false);
  m.def("solve", &solve_doc, py::arg("problem"), py::arg("rho"), py::arg("raw") = false, py::arg("tolerance") = 1e-12);
  m.def("trees", &trees_doc, py::arg("problem"), py::arg("output"), py::arg("index"), py::arg("basis") = "moment");
  m.def("verify", &verify_doc, py::arg("problem"), py::arg("order") = kDefaultOrder, py::arg("basis") = "moment",
        py::arg("radii") = std::vector<double>{0.05, 0.1, 0.2}, py::arg("samples") = 20, py::arg("seed") = 7,
        py::arg("threads") = 0);
}
