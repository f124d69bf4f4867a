#include "maxent/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write(std::ostringstream& out, const Json& v, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << Json(key).dump() << (indent > 0 ? ": " : ":");
        write(out, item, indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool scalars = true;
      for (const auto& item : v) scalars = scalars && !item.is_structured();
      out << '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out << (scalars && indent > 0 ? ", " : ",");
        if (!scalars) out << nl << pad;
        first = false;
        write(out, item, indent, depth + 1);
      }
      if (!scalars) out << nl << close_pad;
      out << ']';
      return;
    }
    case Json::value_t::number_float:
      out << number(v.get<double>());
      return;
    default:
      out << v.dump();
  }
}

Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string dump_json(const Json& doc, int indent) {
  std::ostringstream out;
  write(out, doc, indent, 0);
  out << '\n';
  return out.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("JSON parse error: ") + e.what());
  }
}

Json to_json(const Problem& p) {
  Json doc;
  doc["alphabet"] = p.alphabet;
  doc["q"] = vector_json(p.q);
  Json r = Json::array();
  for (const auto& row : p.r) r.push_back(vector_json(row));
  doc["r"] = r;
  if (p.s) doc["s"] = vector_json(*p.s);
  return doc;
}

Json to_json(const AffineTransform& t) {
  Json b = Json::array();
  for (int i = 0; i < t.b.size(); ++i) b.push_back(t.b(i));
  return Json{{"A", matrix_json(t.A)}, {"b", b}};
}

Json to_json(const Normalization& n) {
  return Json{{"problem", to_json(n.problem.problem())}, {"transform", to_json(n.transform)}};
}

Json to_json(const CoefficientTable& table, const AffineTransform* transform) {
  Json doc;
  doc["basis"] = to_string(table.basis);
  doc["order"] = table.order;
  doc["variables"] = table.variables;
  Json outputs = Json::array();
  for (const auto& [index, series] : table.outputs) {
    const auto counts = table.tree_counts.find(index);
    Json entries = Json::array();
    for (const auto& [mi, value] : series.terms()) {
      Json e{{"index", mi.exponents()}, {"value", value}};
      if (counts != table.tree_counts.end()) {
        const auto c = counts->second.find(mi);
        e["trees"] = c == counts->second.end() ? 0 : c->second;
      }
      entries.push_back(e);
    }
    outputs.push_back(Json{{"index", index}, {"series", entries}});
  }
  doc["outputs"] = outputs;
  if (transform) doc["transform"] = to_json(*transform);
  return doc;
}

StoredTable table_from_json(const Json& doc) {
  StoredTable out;
  try {
    CoefficientTable& t = out.table;
    t.basis = parse_basis(doc.at("basis").get<std::string>());
    t.order = doc.at("order").get<int>();
    if (t.order < 0) throw DataError("table order must be nonnegative");
    const auto& outputs = doc.at("outputs");
    if (doc.contains("variables")) {
      t.variables = doc.at("variables").get<int>();
    } else {
      for (const auto& o : outputs)
        for (const auto& e : o.at("series")) t.variables = static_cast<int>(e.at("index").size());
    }
    if (t.variables < 1) throw DataError("table has no variables");
    for (const auto& o : outputs) {
      TruncatedSeries series(t.variables, t.order);
      for (const auto& e : o.at("series")) {
        const auto exps = e.at("index").get<std::vector<int>>();
        if (static_cast<int>(exps.size()) != t.variables) throw DataError("series index has wrong length");
        for (int a : exps)
          if (a < 0) throw DataError("negative exponent in series index");
        const MultiIndex mi{std::span<const int>(exps)};
        if (mi.degree() > t.order) throw DataError("series index exceeds table order");
        series.set(mi, e.at("value").get<double>());
      }
      t.outputs.emplace(o.at("index").get<int>(), std::move(series));
    }
    if (doc.contains("transform")) {
      const auto& tr = doc.at("transform");
      const auto A = tr.at("A").get<std::vector<std::vector<double>>>();
      const auto b = tr.at("b").get<std::vector<double>>();
      const int k = t.variables;
      if (static_cast<int>(A.size()) != k || static_cast<int>(b.size()) != k) throw DataError("transform has wrong size");
      AffineTransform at{Eigen::MatrixXd(k, k), Eigen::VectorXd(k)};
      for (int i = 0; i < k; ++i) {
        if (static_cast<int>(A[static_cast<std::size_t>(i)].size()) != k) throw DataError("transform has wrong size");
        for (int j = 0; j < k; ++j) at.A(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        at.b(i) = b[static_cast<std::size_t>(i)];
      }
      out.transform = std::move(at);
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed coefficient table: ") + e.what());
  }
  return out;
}

Json to_json(const ExactSolution& sol) {
  Json doc;
  doc["lambda"] = vector_json(sol.lambda);
  doc["lambda0"] = sol.lambda0;
  doc["p"] = vector_json(sol.p);
  doc["sigma"] = optional_json(sol.sigma);
  doc["kl"] = sol.kl;
  doc["iterations"] = sol.iterations;
  doc["residual"] = sol.residual;
  return doc;
}

Json to_json(const CoefficientReport& report) {
  Json trees = Json::array();
  for (const auto& t : report.trees) {
    trees.push_back(Json{{"encoding", t.encoding},
                         {"amplitude", t.amplitude},
                         {"aut_size", t.aut_size},
                         {"contribution", t.contribution}});
  }
  return Json{{"basis", to_string(report.basis)},
              {"output", report.output},
              {"index", report.index.exponents()},
              {"trees", trees},
              {"total", report.total},
              {"table_value", report.table_value}};
}

Json to_json(const VerificationReport& report, bool include_wall_time) {
  Json radii = Json::array();
  for (const auto& r : report.radii) {
    Json per = Json::array();
    for (const auto& [index, err] : r.max_error) per.push_back(Json{{"output", index}, {"max_error", err}});
    radii.push_back(Json{{"radius", r.radius}, {"evaluated", r.evaluated}, {"max_error", r.max_error_all}, {"outputs", per}});
  }
  Json slopes = Json::array();
  for (const auto& [index, slope] : report.slopes) slopes.push_back(Json{{"output", index}, {"slope", optional_json(slope)}});
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back(Json{{"radius", f.radius}, {"rho", vector_json(f.rho)}, {"message", f.message}});
  }
  Json doc{{"basis", to_string(report.basis)},
              {"order", report.order},
              {"samples", report.samples},
              {"seed", report.seed},
              {"radii", radii},
              {"slopes", slopes},
              {"slope", optional_json(report.slope)},
              {"failures", failures}};
  if (include_wall_time) doc["wall_seconds"] = report.wall_seconds;
  return doc;
}

}  // namespace maxent
