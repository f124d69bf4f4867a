#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "maxent/algebra.hpp"

namespace maxent {

/// Perturbation of a function with a non-degenerate critical point at y = 0:
///
///   tau^x(y) = T_0 + sum_i theta_i(x) y_i + |y|^2 / 2 + sum_{l>=3} T_l^x(y,..,y) / l!
///
/// on labels 0..dimension-1, with the quadratic pairing already reduced to the
/// identity. Coefficients theta are power series in the `variables` entries of
/// x, truncated at `order`. Degree-1 entries must vanish at x = 0 and degree-2
/// entries must be absent.
class TensorFamily {
 public:
  TensorFamily(int dimension, int variables, int order);

  int dimension() const { return dimension_; }
  int variables() const { return variables_; }
  int order() const { return order_; }
  int max_degree() const;

  /// Sets theta for a label tuple given in any order; degree = labels.size().
  void set(std::vector<int> labels, TruncatedSeries value);
  const TruncatedSeries* find(const std::vector<int>& sorted_labels) const;
  const std::map<int, SymmetricCoefficients<TruncatedSeries>>& degrees() const { return degrees_; }

  /// Throws DataError when theta_1 has a constant term or any degree-2 entry
  /// is present.
  void validate() const;

  /// Coefficients evaluated at x, per degree.
  std::map<int, SymmetricCoefficients<double>> at(std::span<const double> x) const;

 private:
  int dimension_;
  int variables_;
  int order_;
  std::map<int, SymmetricCoefficients<TruncatedSeries>> degrees_;
};

/// crit(tau^x) as one power series per coordinate, plus the number of trees
/// that contributed to each coordinate.
struct CritSeries {
  std::vector<TruncatedSeries> coordinates;
  std::vector<std::map<MultiIndex, int>> tree_counts;
};

struct PairingReduction {
  TensorFamily family;
  /// y = basis * z maps reduced coordinates z back to the original y.
  Eigen::MatrixXd basis;
};

/// Changes coordinates so that the symmetric positive definite pairing B
/// becomes the identity: B = L L^T, y = L^{-T} z, and every tensor is
/// contracted with L^{-T} in each slot. Throws NumericalError when the
/// smallest eigenvalue of B is <= tolerance.
PairingReduction reduce_pairing(const Eigen::MatrixXd& pairing, const TensorFamily& family, double tolerance = 1e-12);

/// Gradient of tau^x at y: theta_1 + y + sum_l T_l(y^{l-1}) / (l-1)!.
std::vector<double> gradient(const TensorFamily& family, std::span<const double> x, std::span<const double> y);

/// y_h = (g^x)^h(0) with g^x(y) = y - grad tau^x(y). Each step contracts every
/// ordered label tuple. Throws NumericalError if |y| stays above ten times
/// |y_1| for three consecutive steps.
std::vector<double> fixed_point_iterate(const TensorFamily& family, std::span<const double> x, int steps);

/// Sum of A_Gamma / |Aut Gamma| over isomorphism types of labeled trees of
/// height <= h, evaluated at x. Types are aggregated per top label: children
/// grouped by label contribute S_i^{n_i} / n_i! for the per-label sums S_i of
/// the next lower height.
std::vector<double> height_truncated_sum(const TensorFamily& family, std::span<const double> x, int height);

/// Tree expansion of crit(tau^x) through x-degree max_order: for each output
/// label, sum over trees with at most max_order leaves of A_Gamma / |Aut|,
/// leaves weighted -theta_i(x) and internal vertices -theta(labels)(x).
CritSeries crit_series(const TensorFamily& family, int max_order);

}  // namespace maxent
