#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace maxent {

/// A KL constraint problem: alphabet, reference weights q, k constraint rows
/// r_i and an optional target row s. Rows are indexed by alphabet position.
struct Problem {
  std::vector<std::string> alphabet;
  std::vector<double> q;
  std::vector<std::vector<double>> r;
  std::optional<std::vector<double>> s;

  int n() const { return static_cast<int>(alphabet.size()); }
  int k() const { return static_cast<int>(r.size()); }
  bool has_target() const { return s.has_value(); }

  /// Row for label 0..k+1: 0 is the constant function 1, k+1 is s.
  double value(int label, int symbol) const;
};

struct LoadOptions {
  /// Drop later rows that depend linearly on earlier ones instead of failing.
  bool drop_dependent = false;
  double rank_tolerance = 1e-9;
};

/// Checks every Problem invariant and returns the validated (possibly
/// reduced, when drop_dependent is set) problem. Throws DataError.
Problem validate_problem(Problem p, const LoadOptions& options = {});

/// Parses the JSON problem document {"alphabet", "q", "r", "s"?}.
Problem load_problem(const std::string& json_text, const LoadOptions& options = {});
Problem load_problem_file(const std::string& path, const LoadOptions& options = {});

struct SampleOptions {
  /// Treat the last column of every record as the target s.
  bool last_column_is_target = false;
  LoadOptions load;
};

/// Builds a problem from "symbol,v1,...,vk[,s]" records. Q is the empirical
/// frequency of each observed symbol, in order of first appearance. Blank
/// lines and lines starting with '#' are skipped.
Problem load_samples(std::istream& records, const SampleOptions& options = {});
Problem load_samples_file(const std::string& path, const SampleOptions& options = {});

/// rho'' = A (rho - b).
struct AffineTransform {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  static AffineTransform identity(int k);
};

std::vector<double> map_constraints(const AffineTransform& t, const std::vector<double>& rho_raw);

struct Normalization;

/// A problem whose constraints satisfy E_Q r_i = 0 and E_Q r_i r_j = delta_ij.
/// Only `normalize` constructs one.
class NormalizedProblem {
 public:
  const Problem& problem() const { return problem_; }
  const Problem& source() const { return source_; }
  int k() const { return problem_.k(); }
  int n() const { return problem_.n(); }

 private:
  friend Normalization normalize(const Problem& p, double tolerance);
  friend NormalizedProblem assume_normalized(Problem p);
  NormalizedProblem(Problem normalized, Problem source)
      : problem_(std::move(normalized)), source_(std::move(source)) {}

  Problem problem_;
  Problem source_;
};

struct Normalization {
  NormalizedProblem problem;
  AffineTransform transform;
};

inline constexpr double kDefaultSingularTolerance = 1e-9;

/// Centers each r_i under Q and runs Gram-Schmidt in row order with the
/// pairing Cov(f,g) = sum q f g. Each pivot is compared to `tolerance` times
/// the centered row's own variance; a smaller pivot throws NumericalError.
/// s is passed through untouched.
Normalization normalize(const Problem& p, double tolerance = kDefaultSingularTolerance);

/// Wraps a problem that is already normalized after checking the moment
/// conditions to 1e-10. Throws DataError otherwise.
NormalizedProblem assume_normalized(Problem p);

/// E_Q of the given row (length n).
double expectation(const Problem& p, const std::vector<double>& row);

}  // namespace maxent
