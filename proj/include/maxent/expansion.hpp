#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "maxent/algebra.hpp"
#include "maxent/critical.hpp"
#include "maxent/moments.hpp"
#include "maxent/problem.hpp"

namespace maxent {

inline constexpr int kDefaultOrder = 6;

std::string to_string(Basis basis);
Basis parse_basis(const std::string& name);

/// Taylor coefficients in normalized rho coordinates, one series per output.
///
/// Output indices: 0 is lambda'_0 = lambda_0 + 1, 1..k are lambda_1..lambda_k
/// and k+1 is the target expectation sigma.
struct CoefficientTable {
  Basis basis = Basis::moment;
  int order = 0;
  int variables = 0;
  std::map<int, TruncatedSeries> outputs;
  /// Number of trees feeding each coefficient, where tree sums were used.
  std::map<int, std::map<MultiIndex, int>> tree_counts;

  const TruncatedSeries& output(int index) const;
  bool has_output(int index) const { return outputs.contains(index); }
};

/// The critical-point family of the KL dual. Moment basis: labels 0..k
/// (engine label = problem label), theta_i = rho_i for 1 <= i <= k and
/// theta_{i_1..i_l} = (-1)^l E_Q prod r for l >= 3. Cumulant basis: labels
/// 1..k (engine label = problem label - 1) with joint cumulants in place of
/// moments.
TensorFamily kl_tensor_family(const NormalizedProblem& np, Basis basis, int order);

/// lambda'_0..lambda_k (moment basis) or lambda_1..lambda_k plus lambda'_0
/// recovered as log E_Q exp(-sum lambda_i r_i) (cumulant basis).
CoefficientTable lambda_coefficients(const NormalizedProblem& np, Basis basis, int order);

/// sigma(rho) by substituting the lambda series into the single-vertex
/// expansion of mu(lambda). Output index k+1. Throws DataError without s.
CoefficientTable sigma_coefficients(const NormalizedProblem& np, Basis basis, int order);

/// lambda outputs plus sigma when the problem has a target.
CoefficientTable expand(const NormalizedProblem& np, Basis basis, int order);

/// Per-output values at rho (normalized coordinates), keyed by output index.
std::map<int, double> evaluate(const CoefficientTable& table, const std::vector<double>& rho);

/// Direct tree sum for one output: enumerate the j-moment or j-cumulant
/// trees, weight each by its signed amplitude over |Aut| and collect rho^I.
/// Independent of the tensor-family engine. Output k+1 uses the composed
/// target trees whose root may carry a single child.
TruncatedSeries tree_sum_coefficients(const NormalizedProblem& np, Basis basis, int output, int order);

struct TreeContribution {
  std::string encoding;
  double amplitude = 0.0;
  std::uint64_t aut_size = 1;
  double contribution = 0.0;
};

struct CoefficientReport {
  Basis basis = Basis::moment;
  int output = 0;
  MultiIndex index;
  std::vector<TreeContribution> trees;
  double total = 0.0;
  double table_value = 0.0;
};

/// Every tree feeding coefficient (output, index) with its amplitude, |Aut|
/// and contribution; `table_value` is the engine's coefficient for comparison.
CoefficientReport coefficient_report(const NormalizedProblem& np, Basis basis, int output, const MultiIndex& index);

}  // namespace maxent
