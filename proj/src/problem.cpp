#include "maxent/problem.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "maxent/errors.hpp"

namespace maxent {

using nlohmann::json;

double Problem::value(int label, int symbol) const {
  const auto sym = static_cast<std::size_t>(symbol);
  if (label == 0) return 1.0;
  if (label >= 1 && label <= k()) return r[static_cast<std::size_t>(label - 1)][sym];
  if (label == k() + 1 && s) return (*s)[sym];
  throw DataError("label " + std::to_string(label) + " out of range for k=" + std::to_string(k()) +
                  (s ? "" : " without target"));
}

double expectation(const Problem& p, const std::vector<double>& row) {
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) total += p.q[i] * row[i];
  return total;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Indices of rows independent of their predecessors (Euclidean Gram-Schmidt).
std::vector<std::size_t> independent_rows(const std::vector<std::vector<double>>& rows, double tol) {
  std::vector<std::vector<double>> basis;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> v = rows[i];
    const double original = dot(v, v);
    for (const auto& u : basis) {
      const double c = dot(v, u);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * u[j];
    }
    const double residual = dot(v, v);
    if (original == 0.0 || residual <= tol * original) continue;
    const double norm = std::sqrt(residual);
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
    kept.push_back(i);
  }
  return kept;
}

}  // namespace

Problem validate_problem(Problem p, const LoadOptions& options) {
  const auto n = p.alphabet.size();
  if (n < 2) throw DataError("alphabet needs at least 2 symbols, got " + std::to_string(n));
  if (p.q.size() != n) throw DataError("q has " + std::to_string(p.q.size()) + " entries for " + std::to_string(n) + " symbols");
  if (p.r.empty()) throw DataError("at least one constraint row is required");
  for (const auto& row : p.r) {
    if (row.size() != n) throw DataError("constraint row length does not match alphabet size");
  }
  if (p.s && p.s->size() != n) throw DataError("target row length does not match alphabet size");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.q[i])) throw DataError("non-finite reference weight");
    if (p.q[i] == 0.0) throw DataError("zero reference weight for symbol '" + p.alphabet[i] + "'");
    if (p.q[i] < 0.0) throw DataError("negative reference weight for symbol '" + p.alphabet[i] + "'");
  }
  const double total = std::accumulate(p.q.begin(), p.q.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "reference weights sum to " << total << ", not 1";
    throw DataError(os.str());
  }
  const auto kept = independent_rows(p.r, options.rank_tolerance);
  if (kept.size() != p.r.size()) {
    if (!options.drop_dependent) {
      throw DataError("constraints rank-deficient (rank " + std::to_string(kept.size()) + " < k=" +
                      std::to_string(p.r.size()) + ")");
    }
    std::vector<std::vector<double>> reduced;
    for (auto i : kept) reduced.push_back(p.r[i]);
    p.r = std::move(reduced);
  }
  return p;
}

Problem load_problem(const std::string& json_text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("problem document parse error: ") + e.what());
  }
  Problem p;
  try {
    p.alphabet = doc.at("alphabet").get<std::vector<std::string>>();
    p.q = doc.at("q").get<std::vector<double>>();
    p.r = doc.at("r").get<std::vector<std::vector<double>>>();
    if (doc.contains("s") && !doc.at("s").is_null()) p.s = doc.at("s").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("problem document does not match schema: ") + e.what());
  }
  return validate_problem(std::move(p), options);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw DataError("line " + std::to_string(line_no) + ": '" + field + "' is not a number");
  }
  return v;
}

}  // namespace

Problem load_problem_file(const std::string& path, const LoadOptions& options) {
  return load_problem(read_file(path), options);
}

Problem load_samples(std::istream& records, const SampleOptions& options) {
  std::vector<std::string> symbols;
  std::vector<std::vector<double>> values;  // per symbol, per column
  std::vector<long> counts;
  long total = 0;
  std::size_t columns = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(records, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2) throw DataError("line " + std::to_string(line_no) + ": expected symbol and at least one value");
    if (columns == 0) columns = fields.size() - 1;
    if (fields.size() - 1 != columns) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " values");
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < fields.size(); ++c) row.push_back(parse_number(fields[c], line_no));
    const auto it = std::find(symbols.begin(), symbols.end(), fields[0]);
    if (it == symbols.end()) {
      symbols.push_back(fields[0]);
      values.push_back(row);
      counts.push_back(1);
    } else {
      const auto idx = static_cast<std::size_t>(it - symbols.begin());
      if (values[idx] != row) {
        throw DataError("line " + std::to_string(line_no) + ": inconsistent observable for repeated symbol '" +
                        fields[0] + "'");
      }
      ++counts[idx];
    }
    ++total;
  }
  if (symbols.size() < 2) throw DataError("samples cover a single-symbol support; need at least 2 distinct symbols");
  const std::size_t k = options.last_column_is_target ? columns - 1 : columns;
  if (k == 0) throw DataError("samples carry no constraint observables");
  Problem p;
  p.alphabet = symbols;
  for (long c : counts) p.q.push_back(static_cast<double>(c) / static_cast<double>(total));
  p.r.assign(k, std::vector<double>(symbols.size()));
  for (std::size_t sym = 0; sym < symbols.size(); ++sym) {
    for (std::size_t i = 0; i < k; ++i) p.r[i][sym] = values[sym][i];
  }
  if (options.last_column_is_target) {
    p.s = std::vector<double>(symbols.size());
    for (std::size_t sym = 0; sym < symbols.size(); ++sym) (*p.s)[sym] = values[sym][k];
  }
  // empirical frequencies are exact ratios but their float sum can miss 1 by an ulp or two
  const double sum = std::accumulate(p.q.begin(), p.q.end(), 0.0);
  p.q.back() += 1.0 - sum;
  return validate_problem(std::move(p), options.load);
}

Problem load_samples_file(const std::string& path, const SampleOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_samples(in, options);
}

AffineTransform AffineTransform::identity(int k) {
  return {Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Zero(k)};
}

std::vector<double> map_constraints(const AffineTransform& t, const std::vector<double>& rho_raw) {
  if (static_cast<Eigen::Index>(rho_raw.size()) != t.b.size()) {
    throw DataError("constraint vector has " + std::to_string(rho_raw.size()) + " entries, transform expects " +
                    std::to_string(t.b.size()));
  }
  const Eigen::VectorXd raw = Eigen::Map<const Eigen::VectorXd>(rho_raw.data(), t.b.size());
  const Eigen::VectorXd mapped = t.A * (raw - t.b);
  return {mapped.data(), mapped.data() + mapped.size()};
}

Normalization normalize(const Problem& p, double tolerance) {
  const int k = p.k();
  const int n = p.n();
  auto cov = [&](const std::vector<double>& f, const std::vector<double>& g) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += p.q[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
    return total;
  };

  Eigen::VectorXd b(k);
  std::vector<std::vector<double>> centered(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const auto& row = p.r[static_cast<std::size_t>(i)];
    b(i) = expectation(p, row);
    auto& c = centered[static_cast<std::size_t>(i)];
    c.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) c[static_cast<std::size_t>(s)] = row[static_cast<std::size_t>(s)] - b(i);
  }

  // Modified Gram-Schmidt; row i of A expresses r''_i in terms of the centered rows.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  std::vector<std::vector<double>> ortho;
  for (int i = 0; i < k; ++i) {
    std::vector<double> v = centered[static_cast<std::size_t>(i)];
    Eigen::RowVectorXd coeffs = Eigen::RowVectorXd::Unit(k, i);
    const double variance = cov(v, v);
    for (int j = 0; j < i; ++j) {
      const auto& u = ortho[static_cast<std::size_t>(j)];
      const double c = cov(v, u);
      for (int s = 0; s < n; ++s) v[static_cast<std::size_t>(s)] -= c * u[static_cast<std::size_t>(s)];
      coeffs -= c * A.row(j);
    }
    const double pivot = cov(v, v);
    if (!(pivot > tolerance * variance) || variance == 0.0) {
      throw NumericalError("covariance Gram matrix singular at constraint " + std::to_string(i + 1) +
                           " (pivot below tolerance)");
    }
    const double scale = 1.0 / std::sqrt(pivot);
    for (double& x : v) x *= scale;
    A.row(i) = coeffs * scale;
    ortho.push_back(std::move(v));
  }

  Problem normalized = p;
  normalized.r = std::move(ortho);
  return {NormalizedProblem(std::move(normalized), p), AffineTransform{std::move(A), std::move(b)}};
}

NormalizedProblem assume_normalized(Problem p) {
  const int k = p.k();
  for (int i = 0; i < k; ++i) {
    const auto& ri = p.r[static_cast<std::size_t>(i)];
    if (std::abs(expectation(p, ri)) > 1e-10) throw DataError("constraint " + std::to_string(i + 1) + " is not centered");
    for (int j = 0; j < k; ++j) {
      const auto& rj = p.r[static_cast<std::size_t>(j)];
      double m = 0.0;
      for (int s = 0; s < p.n(); ++s) m += p.q[static_cast<std::size_t>(s)] * ri[static_cast<std::size_t>(s)] * rj[static_cast<std::size_t>(s)];
      if (std::abs(m - (i == j ? 1.0 : 0.0)) > 1e-10) throw DataError("constraints are not covariance-orthonormal");
    }
  }
  Problem copy = p;
  return NormalizedProblem(std::move(p), std::move(copy));
}

}  // namespace maxent
