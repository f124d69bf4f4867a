#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maxent/expansion.hpp"
#include "maxent/problem.hpp"

namespace maxent {

/// The KL minimizer P for given constraint values, with its exponential
/// parameters p_s = q_s exp(-1 - lambda_0 - sum_i lambda_i r_i(s)).
struct ExactSolution {
  std::vector<double> lambda;  // lambda_1..lambda_k
  double lambda0 = 0.0;
  std::vector<double> p;
  std::optional<double> sigma;  // E_P s
  double kl = 0.0;
  int iterations = 0;
  double residual = 0.0;  // gradient norm at exit
  /// Dual objective after each accepted Newton step; nonincreasing up to
  /// round-off in f.
  std::vector<double> objective_trace;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  double armijo_slope = 1e-4;
  double backtrack = 0.5;
};

/// Minimizes the dual E_Q exp(-sum_{i=0..k} lambda'_i r_i) + sum_i lambda_i rho_i
/// + lambda'_0 - 1 over lambda' = (lambda_0 + 1, lambda_1..lambda_k) by
/// Newton's method with Armijo backtracking from lambda' = 0. Once the
/// predicted decrease is below the rounding of f, backtracking uses the
/// gradient norm as merit instead. It also stops when the Newton step drops to
/// round-off while the gradient is below 1e-11. Works for any
/// problem; no normalization is needed. Throws NumericalError when the
/// gradient does not reach `tolerance` within the iteration cap or the
/// exponentials overflow, both of which indicate rho outside the achievable
/// region.
ExactSolution solve_exact(const Problem& p, const std::vector<double>& rho, const SolveOptions& options = {});
ExactSolution solve_exact(const NormalizedProblem& np, const std::vector<double>& rho, const SolveOptions& options = {});

/// E_P r_i for P proportional to q exp(-sum lambda_i r_i).
std::vector<double> constraint_values(const Problem& p, const std::vector<double>& lambda);

/// Central-difference Jacobian (step 1e-5) at the origin of rho with respect
/// to the natural parameter eta = -lambda of P proportional to
/// q exp(sum eta_i r_i). It equals Cov_Q(r_i, r_j), the identity on a
/// normalized problem.
Eigen::MatrixXd jacobian_at_zero(const Problem& p, double step = 1e-5);
/// The same Jacobian taken with respect to lambda itself: -Cov_Q(r_i, r_j).
Eigen::MatrixXd lambda_jacobian_at_zero(const Problem& p, double step = 1e-5);

struct VerifyOptions {
  std::vector<double> radii{0.05, 0.1, 0.2};
  int samples = 20;
  std::uint64_t seed = 7;
  SolveOptions solve{1e-13, 200, 1e-4, 0.5};
  /// Worker threads for oracle solves; 0 reads MAXENT_THREADS, then falls
  /// back to the hardware concurrency.
  int threads = 0;
};

struct RadiusErrors {
  double radius = 0.0;
  std::map<int, double> max_error;  // per output index
  double max_error_all = 0.0;
  int evaluated = 0;
};

struct FailedPoint {
  double radius = 0.0;
  std::vector<double> rho;
  std::string message;
};

struct VerificationReport {
  Basis basis = Basis::moment;
  int order = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<RadiusErrors> radii;
  /// Least-squares slope of log(max error) against log(radius). Empty when
  /// fewer than two radii have errors above the round-off floor.
  std::map<int, std::optional<double>> slopes;
  std::optional<double> slope;
  std::vector<FailedPoint> failures;
  double wall_seconds = 0.0;
};

/// Errors at or below this are treated as exact when fitting slopes.
inline constexpr double kRoundoffFloor = 1e-13;

/// Samples rho uniformly on spheres of the given radii, evaluates the table
/// and the exact solver, and fits the error decay order. Oracle failures skip
/// the point; more than half failing throws NumericalError.
VerificationReport verify_series(const NormalizedProblem& np, const CoefficientTable& table, const VerifyOptions& options);

/// Least-squares slope through (log x, log y); nullopt with fewer than 2 points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace maxent
