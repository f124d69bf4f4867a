#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

inline constexpr int kMaxVariables = 16;

/// Exponent vector (a_1..a_k) of a monomial rho^I.
///
/// Ordered graded-lexicographically: lower total degree first, then by
/// exponents compared left to right with larger leading exponents first, so
/// at degree one rho_1 precedes rho_2.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int variables);
  MultiIndex(std::initializer_list<int> exponents);
  explicit MultiIndex(std::span<const int> exponents);

  static MultiIndex unit(int variables, int i);

  int size() const { return size_; }
  int degree() const { return degree_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  void increment(int i, int by = 1);

  std::vector<int> exponents() const;
  std::string to_string() const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b);
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  std::array<std::uint8_t, kMaxVariables> exps_{};
  int size_ = 0;
  int degree_ = 0;
};

/// All multi-indices over `variables` variables with total degree <= `degree`,
/// in graded-lex order.
std::vector<MultiIndex> all_multi_indices(int variables, int degree);

/// Multivariate power series in k variables truncated at total degree d.
/// Coefficients live in a sparse sorted map; absent keys are zero.
class TruncatedSeries {
 public:
  using Terms = std::map<MultiIndex, double>;

  TruncatedSeries() = default;
  TruncatedSeries(int variables, int max_degree);

  static TruncatedSeries constant(int variables, int max_degree, double c);
  static TruncatedSeries variable(int variables, int max_degree, int i, double scale = 1.0);

  int variables() const { return variables_; }
  int max_degree() const { return max_degree_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double coefficient(const MultiIndex& index) const;
  double constant_term() const;
  /// Sets one coefficient; indices above the truncation degree are ignored.
  void set(const MultiIndex& index, double value);
  void add_to(const MultiIndex& index, double value);

  /// Lowest total degree with a nonzero coefficient, or -1 when empty.
  int valuation() const;
  double evaluate(std::span<const double> point) const;
  /// Same series restricted to degrees <= `degree`.
  TruncatedSeries truncated(int degree) const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(double scale);
  TruncatedSeries operator-() const;

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, double s) { return a *= s; }
  friend TruncatedSeries operator*(double s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  /// Largest absolute coefficient difference over the union of supports.
  friend double max_abs_difference(const TruncatedSeries& a, const TruncatedSeries& b);

 private:
  void check_compatible(const TruncatedSeries& other) const;

  int variables_ = 0;
  int max_degree_ = 0;
  Terms terms_;
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
/// a^n by repeated squaring; a^0 is the constant 1.
TruncatedSeries series_pow(const TruncatedSeries& a, int n);

/// Symmetric coefficients of one degree l over labels 0..dimension-1.
/// Only sorted label tuples are stored, so symmetry holds by construction.
template <class Value>
class SymmetricCoefficients {
 public:
  using Key = std::vector<int>;

  SymmetricCoefficients() = default;
  SymmetricCoefficients(int dimension, int degree) : dimension_(dimension), degree_(degree) {}

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  const std::map<Key, Value>& entries() const { return entries_; }

  void set(Key labels, Value value) {
    check(labels);
    std::sort(labels.begin(), labels.end());
    entries_.insert_or_assign(std::move(labels), std::move(value));
  }

  /// Entry for `labels` in any order, or nullptr when absent (zero).
  const Value* find(Key labels) const {
    std::sort(labels.begin(), labels.end());
    auto it = entries_.find(labels);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const Value* find_sorted(const Key& sorted_labels) const {
    auto it = entries_.find(sorted_labels);
    return it == entries_.end() ? nullptr : &it->second;
  }

 private:
  void check(const Key& labels) const {
    if (static_cast<int>(labels.size()) != degree_) {
      throw DataError("symmetric coefficient arity " + std::to_string(labels.size()) +
                      " does not match degree " + std::to_string(degree_));
    }
    for (int l : labels) {
      if (l < 0 || l >= dimension_) throw DataError("label " + std::to_string(l) + " out of range");
    }
  }

  int dimension_ = 0;
  int degree_ = 0;
  std::map<Key, Value> entries_;
};

/// A vector of series indexed by label: the value of a V-valued series.
using SeriesVector = std::vector<TruncatedSeries>;

/// Sum over all ordered label tuples of theta(i_1..i_l) * prod_j args[j][i_j].
TruncatedSeries apply_multilinear(const SymmetricCoefficients<double>& theta,
                                  std::span<const SeriesVector> args);

/// theta(y, ..., y): the multilinear form with every argument equal to `y`.
/// Equivalent to apply_multilinear with l copies of y, computed over sorted
/// tuples with multinomial weights.
TruncatedSeries apply_symmetric_power(const SymmetricCoefficients<double>& theta,
                                      const SeriesVector& y);

/// Multinomial coefficient l! / prod(mult!) of a sorted label tuple.
double multinomial_of_sorted(std::span<const int> sorted_labels);
double factorial(int n);

}  // namespace maxent
