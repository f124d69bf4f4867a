#pragma once

#include <map>
#include <span>
#include <vector>

#include "maxent/problem.hpp"

namespace maxent {

/// Labels follow the problem's convention: 0 is the constant function 1,
/// 1..k are the constraints and k+1 is the target s.

/// E_Q[prod_j r_{labels_j}], computed directly. Throws DataError on a label
/// outside 0..k (or 0..k+1 when s is present).
double joint_moment(const Problem& p, std::span<const int> labels);

/// Joint cumulant by the set-partition formula
///   kappa(X_1..X_n) = sum_pi (|pi|-1)! (-1)^(|pi|-1) prod_{B in pi} E[prod_{j in B} X_j].
/// Labels must lie in 1..k (1..k+1 with s) and be nonempty.
double joint_cumulant(const Problem& p, std::span<const int> labels);

/// All set partitions of {0..n-1} as restricted-growth strings.
const std::vector<std::vector<int>>& set_partitions(int n);

enum class Basis { moment, cumulant };

/// Precomputed moments or cumulants of every label multiset up to a given
/// size, keyed by sorted labels. Built once, then read-only.
class CouplingTable {
 public:
  Basis basis() const { return basis_; }
  int max_size() const { return max_size_; }
  int max_label() const { return max_label_; }

  /// Entry for a label multiset in any order. Moment lookups ignore label 0.
  /// Throws DataError for labels out of range or multisets larger than the
  /// table was built for.
  double at(std::vector<int> labels) const;
  double at_sorted(const std::vector<int>& sorted_labels) const;

  const std::map<std::vector<int>, double>& entries() const { return entries_; }

  friend CouplingTable moment_table(const Problem& p, int max_size);
  friend CouplingTable cumulant_table(const Problem& p, int max_size);

 private:
  CouplingTable(Basis basis, int min_label, int max_label, int max_size)
      : basis_(basis), min_label_(min_label), max_label_(max_label), max_size_(max_size) {}

  Basis basis_;
  int min_label_;
  int max_label_;
  int max_size_;
  std::map<std::vector<int>, double> entries_;
};

/// Joint moments over labels 0..k(+1) for every multiset of size <= max_size.
CouplingTable moment_table(const Problem& p, int max_size);
/// Joint cumulants over labels 1..k(+1), nonempty multisets of size <= max_size.
CouplingTable cumulant_table(const Problem& p, int max_size);

/// Inverse of the partition formula: E[prod X_j] = sum_pi prod_{B in pi} kappa(X_B).
double moment_from_cumulants(const CouplingTable& cumulants, std::span<const int> labels);

}  // namespace maxent
