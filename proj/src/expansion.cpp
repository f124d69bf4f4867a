#include "maxent/expansion.hpp"

#include <functional>

#include "maxent/errors.hpp"
#include "maxent/trees.hpp"

namespace maxent {

std::string to_string(Basis basis) { return basis == Basis::moment ? "moment" : "cumulant"; }

Basis parse_basis(const std::string& name) {
  if (name == "moment") return Basis::moment;
  if (name == "cumulant") return Basis::cumulant;
  throw DataError("unknown basis '" + name + "' (expected moment or cumulant)");
}

const TruncatedSeries& CoefficientTable::output(int index) const {
  auto it = outputs.find(index);
  if (it == outputs.end()) throw DataError("coefficient table has no output " + std::to_string(index));
  return it->second;
}

namespace {

void check_order(int order) {
  if (order < 1) throw DataError("expansion order must be >= 1");
}

// Calls fn(sorted labels) for each multiset of labels in [lo, hi] of exactly `size`.
template <class Fn>
void for_each_sorted(int lo, int hi, int size, Fn&& fn) {
  std::vector<int> current;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(current.size()) == size) {
      fn(current);
      return;
    }
    for (int l = start; l <= hi; ++l) {
      current.push_back(l);
      self(self, l);
      current.pop_back();
    }
  };
  rec(rec, lo);
}

double sign_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

// Sum over n of theta_n(y,..,y) where theta_n(K) = coupling(K) (-1)^n / n!, n = 1..order.
TruncatedSeries exponential_contraction(const SeriesVector& y, int order, int label_offset,
                                        const std::function<double(const std::vector<int>&)>& coupling) {
  const int m = static_cast<int>(y.size());
  TruncatedSeries total(y.front().variables(), y.front().max_degree());
  for (int n = 1; n <= order; ++n) {
    SymmetricCoefficients<double> theta(m, n);
    for_each_sorted(0, m - 1, n, [&](const std::vector<int>& key) {
      std::vector<int> labels = key;
      for (int& l : labels) l += label_offset;
      const double c = coupling(labels);
      if (c != 0.0) theta.set(key, c * sign_power(n) / factorial(n));
    });
    total += apply_symmetric_power(theta, y);
  }
  return total;
}

void check_output(const NormalizedProblem& np, int output) {
  if (output < 0 || output > np.k() + 1) throw DataError("output index " + std::to_string(output) + " out of range");
  if (output == np.k() + 1 && !np.problem().has_target()) throw DataError("output k+1 requires a target function s");
}

}  // namespace

TensorFamily kl_tensor_family(const NormalizedProblem& np, Basis basis, int order) {
  check_order(order);
  const Problem& p = np.problem();
  const int k = np.k();
  const int offset = basis == Basis::moment ? 0 : 1;  // problem label = engine label + offset
  const int m = basis == Basis::moment ? k + 1 : k;
  TensorFamily family(m, k, order);
  for (int i = 1; i <= k; ++i) family.set({i - offset}, TruncatedSeries::variable(k, order, i - 1));
  const CouplingTable table = basis == Basis::moment ? moment_table(p, order + 1) : cumulant_table(p, order + 1);
  for (int l = 3; l <= order + 1; ++l) {
    for_each_sorted(offset, k, l, [&](const std::vector<int>& labels) {
      const double c = table.at_sorted(labels);
      if (c == 0.0) return;
      std::vector<int> engine = labels;
      for (int& x : engine) x -= offset;
      family.set(std::move(engine), TruncatedSeries::constant(k, order, sign_power(l) * c));
    });
  }
  return family;
}

CoefficientTable lambda_coefficients(const NormalizedProblem& np, Basis basis, int order) {
  const TensorFamily family = kl_tensor_family(np, basis, order);
  const CritSeries crit = crit_series(family, order);
  const int k = np.k();
  CoefficientTable table;
  table.basis = basis;
  table.order = order;
  table.variables = k;
  if (basis == Basis::moment) {
    for (int j = 0; j <= k; ++j) {
      table.outputs.emplace(j, crit.coordinates[static_cast<std::size_t>(j)]);
      table.tree_counts.emplace(j, crit.tree_counts[static_cast<std::size_t>(j)]);
    }
    return table;
  }
  for (int j = 1; j <= k; ++j) {
    table.outputs.emplace(j, crit.coordinates[static_cast<std::size_t>(j - 1)]);
    table.tree_counts.emplace(j, crit.tree_counts[static_cast<std::size_t>(j - 1)]);
  }
  // lambda'_0 = log E_Q exp(-sum lambda_i r_i), the cumulant generating function at -lambda
  const CouplingTable cumulants = cumulant_table(np.problem(), order);
  table.outputs.emplace(0, exponential_contraction(crit.coordinates, order, 1,
                                                   [&](const std::vector<int>& l) { return cumulants.at_sorted(l); }));
  return table;
}

namespace {

// mu(lambda) with the lambda series substituted. Moment basis:
//   mu = sum_n (-1)^n / n! sum_{i_1..i_n in 0..k} E_Q(s r_i1..r_in) prod lambda'
// cumulant basis:
//   mu = sum_n (-1)^n / n! sum_{i_1..i_n in 1..k} kappa(s, r_i1..r_in) prod lambda
TruncatedSeries sigma_series(const NormalizedProblem& np, const CoefficientTable& lambdas) {
  const Problem& p = np.problem();
  if (!p.has_target()) throw DataError("sigma expansion requires a target function s");
  const int k = np.k();
  const int order = lambdas.order;
  const bool moment = lambdas.basis == Basis::moment;
  SeriesVector y;
  for (int j = moment ? 0 : 1; j <= k; ++j) y.push_back(lambdas.output(j));
  const CouplingTable table = moment ? moment_table(p, order + 1) : cumulant_table(p, order + 1);
  TruncatedSeries sigma = exponential_contraction(y, order, moment ? 0 : 1, [&](const std::vector<int>& labels) {
    std::vector<int> with_target = labels;
    with_target.push_back(k + 1);
    return table.at_sorted(with_target);
  });
  sigma += TruncatedSeries::constant(k, order, joint_moment(p, std::vector<int>{k + 1}));
  return sigma;
}

}  // namespace

CoefficientTable sigma_coefficients(const NormalizedProblem& np, Basis basis, int order) {
  if (!np.problem().has_target()) throw DataError("sigma expansion requires a target function s");
  const CoefficientTable lambdas = lambda_coefficients(np, basis, order);
  CoefficientTable out;
  out.basis = basis;
  out.order = order;
  out.variables = np.k();
  out.outputs.emplace(np.k() + 1, sigma_series(np, lambdas));
  return out;
}

CoefficientTable expand(const NormalizedProblem& np, Basis basis, int order) {
  CoefficientTable table = lambda_coefficients(np, basis, order);
  if (np.problem().has_target()) table.outputs.emplace(np.k() + 1, sigma_series(np, table));
  return table;
}

std::map<int, double> evaluate(const CoefficientTable& table, const std::vector<double>& rho) {
  if (static_cast<int>(rho.size()) != table.variables) {
    throw DataError("rho has " + std::to_string(rho.size()) + " entries, table expects " + std::to_string(table.variables));
  }
  std::map<int, double> out;
  for (const auto& [index, series] : table.outputs) out.emplace(index, series.evaluate(rho));
  return out;
}

TruncatedSeries tree_sum_coefficients(const NormalizedProblem& np, Basis basis, int output, int order) {
  check_order(order);
  check_output(np, output);
  const int k = np.k();
  if (basis == Basis::cumulant && output == 0) throw DataError("lambda'_0 has no cumulant-tree expansion");
  const TreeFamilySpec spec = basis == Basis::moment ? moment_tree_family(k, output) : cumulant_tree_family(k, output);
  const CouplingTable table =
      basis == Basis::moment ? moment_table(np.problem(), order + 1) : cumulant_table(np.problem(), order + 1);
  TruncatedSeries series(k, order);
  for (const auto& tree : enumerate_trees(spec, order)) {
    const Amplitude a = amplitude(tree, table, k);
    series.add_to(a.leaf_index, a.contribution());
  }
  return series;
}

CoefficientReport coefficient_report(const NormalizedProblem& np, Basis basis, int output, const MultiIndex& index) {
  check_output(np, output);
  const int k = np.k();
  if (index.size() != k) throw DataError("multi-index has " + std::to_string(index.size()) + " entries, expected " + std::to_string(k));
  if (basis == Basis::cumulant && output == 0) throw DataError("lambda'_0 has no cumulant-tree expansion");
  const int order = std::max(1, index.degree());
  const TreeFamilySpec spec = basis == Basis::moment ? moment_tree_family(k, output) : cumulant_tree_family(k, output);
  const CouplingTable table =
      basis == Basis::moment ? moment_table(np.problem(), order + 1) : cumulant_table(np.problem(), order + 1);

  CoefficientReport report;
  report.basis = basis;
  report.output = output;
  report.index = index;
  for (const auto& tree : trees_with_index(spec, index)) {
    const Amplitude a = amplitude(tree, table, k);
    report.trees.push_back({tree.encoding(), a.value, a.aut_size, a.contribution()});
    report.total += a.contribution();
  }
  report.table_value = expand(np, basis, order).output(output).coefficient(index);
  return report;
}

}  // namespace maxent
