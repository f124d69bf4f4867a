#include "maxent/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

constexpr double kMaxExponent = 700.0;
// Largest gradient accepted when Newton stalls at round-off.
constexpr double kStallGradient = 1e-11;

struct DualState {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  bool finite = true;
};

// Dual objective in lambda' = (lambda'_0, lambda_1..lambda_k); row 0 of `rows` is the constant 1.
DualState dual(const Problem& p, const Eigen::MatrixXd& rows, const Eigen::VectorXd& rho1, const Eigen::VectorXd& x,
               bool derivatives) {
  DualState st;
  const int dim = static_cast<int>(rows.rows());
  const Eigen::VectorXd exponents = -(rows.transpose() * x);
  if (exponents.maxCoeff() > kMaxExponent || !exponents.allFinite()) {
    st.finite = false;
    return st;
  }
  Eigen::VectorXd w(p.n());
  for (int s = 0; s < p.n(); ++s) w(s) = p.q[static_cast<std::size_t>(s)] * std::exp(exponents(s));
  st.value = w.sum() + rho1.dot(x) - 1.0;
  if (derivatives) {
    st.gradient = rho1 - rows * w;
    st.hessian = rows * w.asDiagonal() * rows.transpose();
    (void)dim;
  }
  return st;
}

Eigen::MatrixXd augmented_rows(const Problem& p) {
  Eigen::MatrixXd rows(p.k() + 1, p.n());
  for (int s = 0; s < p.n(); ++s) {
    rows(0, s) = 1.0;
    for (int i = 0; i < p.k(); ++i) rows(i + 1, s) = p.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
  }
  return rows;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MAXENT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ExactSolution solve_exact(const Problem& p, const std::vector<double>& rho, const SolveOptions& options) {
  const int k = p.k();
  if (static_cast<int>(rho.size()) != k) {
    throw DataError("rho has " + std::to_string(rho.size()) + " entries, problem has k=" + std::to_string(k));
  }
  const Eigen::MatrixXd rows = augmented_rows(p);
  Eigen::VectorXd rho1(k + 1);
  rho1(0) = 1.0;
  for (int i = 0; i < k; ++i) rho1(i + 1) = rho[static_cast<std::size_t>(i)];

  ExactSolution sol;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k + 1);
  DualState st = dual(p, rows, rho1, x, true);
  sol.objective_trace.push_back(st.value);
  int it = 0;
  while (st.gradient.norm() > options.tolerance) {
    if (it >= options.max_iterations) {
      throw NumericalError("Newton solver did not converge in " + std::to_string(options.max_iterations) +
                           " iterations (rho likely outside the achievable region)");
    }
    const Eigen::VectorXd step = st.hessian.ldlt().solve(-st.gradient);
    if (!step.allFinite()) throw NumericalError("Newton step is not finite (degenerate Hessian)");
    // below the round-off floor the tolerance may be unreachable; a step that
    // cannot move x any more means we are done
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.lpNorm<Eigen::Infinity>());
    if (step.lpNorm<Eigen::Infinity>() <= noise && st.gradient.norm() <= kStallGradient) break;
    const double slope = st.gradient.dot(step);
    // Near the optimum the predicted decrease falls below the rounding of f
    // itself; f can no longer rank trial points, so the gradient norm (which
    // is resolved to ~1e-16) becomes the merit function instead.
    const bool f_unresolved = -slope <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(st.value));
    double t = 1.0;
    DualState trial;
    while (true) {
      trial = dual(p, rows, rho1, x + t * step, f_unresolved);
      if (trial.finite) {
        if (f_unresolved ? trial.gradient.norm() < st.gradient.norm()
                         : trial.value <= st.value + options.armijo_slope * t * slope + 4e-16 * std::abs(st.value)) {
          break;
        }
      }
      t *= options.backtrack;
      if (t < 1e-20) {
        throw NumericalError(trial.finite ? "line search failed to decrease the dual objective"
                                          : "exponential overflow (extreme lambda; rho likely infeasible)");
      }
    }
    const Eigen::VectorXd next = x + t * step;
    if (next == x) throw NumericalError("Newton iterate stalled before reaching the tolerance");
    x = next;
    st = dual(p, rows, rho1, x, true);
    sol.objective_trace.push_back(st.value);
    ++it;
  }

  sol.iterations = it;
  sol.residual = st.gradient.norm();
  sol.lambda0 = x(0) - 1.0;
  sol.lambda.assign(x.data() + 1, x.data() + x.size());
  const Eigen::VectorXd exponents = -(rows.transpose() * x);
  sol.p.resize(static_cast<std::size_t>(p.n()));
  for (int s = 0; s < p.n(); ++s) {
    const auto u = static_cast<std::size_t>(s);
    sol.p[u] = p.q[u] * std::exp(exponents(s));
    sol.kl += sol.p[u] * exponents(s);
  }
  if (p.s) {
    double sigma = 0.0;
    for (std::size_t s = 0; s < sol.p.size(); ++s) sigma += sol.p[s] * (*p.s)[s];
    sol.sigma = sigma;
  }
  return sol;
}

ExactSolution solve_exact(const NormalizedProblem& np, const std::vector<double>& rho, const SolveOptions& options) {
  return solve_exact(np.problem(), rho, options);
}

std::vector<double> constraint_values(const Problem& p, const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != p.k()) throw DataError("lambda has wrong dimension");
  std::vector<double> w(static_cast<std::size_t>(p.n()));
  double z = 0.0;
  for (int s = 0; s < p.n(); ++s) {
    double e = 0.0;
    for (int i = 0; i < p.k(); ++i) e -= lambda[static_cast<std::size_t>(i)] * p.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    w[static_cast<std::size_t>(s)] = p.q[static_cast<std::size_t>(s)] * std::exp(e);
    z += w[static_cast<std::size_t>(s)];
  }
  std::vector<double> rho(static_cast<std::size_t>(p.k()), 0.0);
  for (int i = 0; i < p.k(); ++i) {
    for (int s = 0; s < p.n(); ++s) rho[static_cast<std::size_t>(i)] += w[static_cast<std::size_t>(s)] * p.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    rho[static_cast<std::size_t>(i)] /= z;
  }
  return rho;
}

Eigen::MatrixXd lambda_jacobian_at_zero(const Problem& p, double step) {
  const int k = p.k();
  Eigen::MatrixXd jac(k, k);
  for (int j = 0; j < k; ++j) {
    std::vector<double> plus(static_cast<std::size_t>(k), 0.0);
    std::vector<double> minus(static_cast<std::size_t>(k), 0.0);
    plus[static_cast<std::size_t>(j)] = step;
    minus[static_cast<std::size_t>(j)] = -step;
    const auto hi = constraint_values(p, plus);
    const auto lo = constraint_values(p, minus);
    for (int i = 0; i < k; ++i) jac(i, j) = (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) / (2.0 * step);
  }
  return jac;
}

Eigen::MatrixXd jacobian_at_zero(const Problem& p, double step) { return -lambda_jacobian_at_zero(p, step); }

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

VerificationReport verify_series(const NormalizedProblem& np, const CoefficientTable& table, const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int k = np.k();
  if (table.variables != k) throw DataError("table and problem disagree on k");
  if (options.samples < 1) throw DataError("verify needs at least one sample per radius");

  struct Point {
    std::size_t radius_index;
    std::vector<double> rho;
  };
  std::vector<Point> points;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < options.radii.size(); ++r) {
    const double radius = options.radii[r];
    if (radius < 0.0) throw DataError("radii must be nonnegative");
    for (int s = 0; s < options.samples; ++s) {
      std::vector<double> dir(static_cast<std::size_t>(k));
      double len = 0.0;
      while (len == 0.0) {
        len = 0.0;
        for (double& v : dir) {
          v = normal(rng);
          len += v * v;
        }
        len = std::sqrt(len);
      }
      for (double& v : dir) v *= radius / len;
      points.push_back({r, std::move(dir)});
    }
  }

  struct Outcome {
    std::optional<ExactSolution> solution;
    std::string error;
  };
  std::vector<Outcome> outcomes(points.size());
  const int workers = std::min<int>(worker_count(options.threads), static_cast<int>(points.size()));
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < points.size(); i += static_cast<std::size_t>(workers)) {
        try {
          outcomes[i].solution = solve_exact(np, points[i].rho, options.solve);
        } catch (const std::exception& e) {
          outcomes[i].error = e.what();
        }
      }
    }));
  }
  for (auto& j : jobs) j.get();

  VerificationReport report;
  report.basis = table.basis;
  report.order = table.order;
  report.samples = options.samples;
  report.seed = options.seed;
  for (double radius : options.radii) report.radii.push_back({radius, {}, 0.0, 0});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& pt = points[i];
    const Outcome& out = outcomes[i];
    if (!out.solution) {
      report.failures.push_back({options.radii[pt.radius_index], pt.rho, out.error});
      continue;
    }
    RadiusErrors& bucket = report.radii[pt.radius_index];
    ++bucket.evaluated;
    const ExactSolution& sol = *out.solution;
    for (const auto& [index, series] : table.outputs) {
      double exact = 0.0;
      if (index == 0) {
        exact = sol.lambda0 + 1.0;
      } else if (index <= k) {
        exact = sol.lambda[static_cast<std::size_t>(index - 1)];
      } else {
        if (!sol.sigma) continue;
        exact = *sol.sigma;
      }
      const double err = std::abs(series.evaluate(pt.rho) - exact);
      double& worst = bucket.max_error[index];
      worst = std::max(worst, err);
      bucket.max_error_all = std::max(bucket.max_error_all, err);
    }
  }
  if (2 * report.failures.size() > points.size()) {
    throw NumericalError("oracle failed at " + std::to_string(report.failures.size()) + " of " +
                         std::to_string(points.size()) + " sample points");
  }

  auto fit = [&](auto&& error_of) -> std::optional<double> {
    std::vector<double> xs, ys;
    for (const auto& bucket : report.radii) {
      const double e = error_of(bucket);
      if (bucket.radius > 0.0 && bucket.evaluated > 0 && e > kRoundoffFloor) {
        xs.push_back(bucket.radius);
        ys.push_back(e);
      }
    }
    return loglog_slope(xs, ys);
  };
  for (const auto& [index, series] : table.outputs) {
    report.slopes[index] = fit([index = index](const RadiusErrors& b) {
      auto it = b.max_error.find(index);
      return it == b.max_error.end() ? 0.0 : it->second;
    });
  }
  report.slope = fit([](const RadiusErrors& b) { return b.max_error_all; });
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace maxent
