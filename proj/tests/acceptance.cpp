// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "maxent/critical.hpp"
#include "maxent/expansion.hpp"
#include "maxent/moments.hpp"
#include "maxent/oracle.hpp"
#include "maxent/trees.hpp"
#include "support.hpp"

using namespace maxent;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

NormalizedProblem binary() { return normalize(testing::rademacher()).problem; }

// 1. closed forms on the Rademacher problem
void closed_form(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> atanh{0, -1, 0, -1.0 / 3, 0, -1.0 / 5, 0, -1.0 / 7};
  const std::vector<double> log_term{0, 0, 0.5, 0, 0.25, 0, 1.0 / 6, 0};
  double worst = 0.0;
  for (Basis b : {Basis::moment, Basis::cumulant}) {
    const auto t = lambda_coefficients(binary(), b, 7);
    for (int d = 0; d <= 7; ++d) {
      worst = std::max(worst, std::abs(t.output(1).coefficient(MultiIndex{d}) - atanh[static_cast<std::size_t>(d)]));
      worst = std::max(worst, std::abs(t.output(0).coefficient(MultiIndex{d}) - log_term[static_cast<std::size_t>(d)]));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= 1e-10, "coefficient error");
  o.require(elapsed < 5.0, "runtime");
  o.detail << "max coefficient error " << worst << ", " << elapsed << " s";
}

// 2. moment and cumulant tables agree
void basis_equivalence(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const int n = std::min(6, k + 2 + trial % 3);
    const auto np = normalize(testing::random_problem(rng, n, k)).problem;
    const auto m = expand(np, Basis::moment, 6);
    const auto c = expand(np, Basis::cumulant, 6);
    for (const auto& [index, series] : m.outputs) worst = std::max(worst, max_abs_difference(series, c.output(index)));
  }
  const double elapsed = seconds_since(start);
  o.require(worst <= 1e-10, "entry mismatch");
  o.require(elapsed < 60.0, "runtime");
  o.detail << "max entry difference " << worst << " over 20 problems, " << elapsed << " s";
}

// 3. oracle convergence order
void convergence_order(Outcome& o) {
  VerifyOptions opts;
  opts.radii = {0.05, 0.1, 0.2};
  opts.samples = 20;
  opts.seed = 7;
  const auto np = binary();
  const auto report = verify_series(np, expand(np, Basis::moment, 6), opts);
  o.require(report.slope && *report.slope >= 6.5, "binary slope");
  o.detail << "binary d=6 slope " << (report.slope ? *report.slope : NAN);

  std::mt19937_64 rng(99);
  double lowest = INFINITY;
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = normalize(testing::random_problem(rng, 6, 2)).problem;
    const auto r = verify_series(p, expand(p, Basis::moment, 4), opts);
    o.require(r.failures.empty(), "oracle failures on random problem");
    const double s = r.slope ? *r.slope : -INFINITY;
    lowest = std::min(lowest, s);
  }
  o.require(lowest >= 4.5, "random k=2 slope");
  o.detail << "; min random k=2 d=4 slope " << lowest;
}

// 4. height-truncated sums, iterates and the cubic crit series
void height_sum_equality(Outcome& o) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> small(-0.3, 0.3);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 3;
    const int max_degree = 3 + trial % 2;
    const int vars = 2, order = 2;
    TensorFamily f(m, vars, order);
    for (int i = 0; i < m; ++i) {
      TruncatedSeries t(vars, order);
      t.set(MultiIndex{1, 0}, u(rng));
      t.set(MultiIndex{0, 1}, u(rng));
      t.set(MultiIndex{1, 1}, u(rng));
      f.set({i}, t);
    }
    std::vector<int> key;
    std::function<void(int, int)> fill = [&](int start, int degree) {
      if (static_cast<int>(key.size()) == degree) {
        TruncatedSeries t = TruncatedSeries::constant(vars, order, u(rng));
        t.set(MultiIndex{0, 1}, u(rng));
        f.set(key, t);
        return;
      }
      for (int l = start; l < m; ++l) {
        key.push_back(l);
        fill(l, degree);
        key.pop_back();
      }
    };
    for (int d = 3; d <= max_degree; ++d) fill(0, d);
    const std::vector<double> x{small(rng), small(rng)};
    for (int h = 0; h <= 5; ++h) {
      const auto a = height_truncated_sum(f, x, h);
      const auto b = fixed_point_iterate(f, x, h);
      for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
    }
  }
  o.require(worst <= 1e-12, "height sum vs iterate");

  TensorFamily cubic(1, 1, 4);
  cubic.set({0}, TruncatedSeries::variable(1, 4, 0, -1.0));
  cubic.set({0, 0, 0}, TruncatedSeries::constant(1, 4, 1.0));
  const auto s = crit_series(cubic, 4).coordinates[0];
  const std::vector<double> expected{0, 1, -0.5, 0.5, -0.625};
  double series_err = 0.0;
  for (int d = 0; d <= 4; ++d) series_err = std::max(series_err, std::abs(s.coefficient(MultiIndex{d}) - expected[static_cast<std::size_t>(d)]));
  o.require(series_err <= 1e-12, "cubic crit series");
  o.detail << "max |height sum - iterate| " << worst << " (10 families, h<=5); cubic series error " << series_err;
}

// 5. automorphisms and orbit-stabilizer on k=2 specs
void automorphisms(Outcome& o) {
  std::vector<TreeFamilySpec> specs;
  for (int j = 0; j <= 3; ++j) specs.push_back(moment_tree_family(2, j));
  for (int j = 1; j <= 3; ++j) specs.push_back(cumulant_tree_family(2, j));
  std::size_t checked = 0;
  for (const auto& spec : specs) {
    for (const auto& t : enumerate_trees(spec, 6)) {
      if (t.vertex_count() > 8) continue;
      ++checked;
      const std::uint64_t aut = aut_size(t);
      o.require(aut == testing::brute_force_aut(t.root()), "aut size of " + t.encoding());
      const double planar = static_cast<double>(testing::planar_arrangements(t.root()).size());
      o.require(planar * static_cast<double>(aut) == testing::children_factorial_product(t.root()),
                "orbit-stabilizer for " + t.encoding());
    }
  }
  o.detail << checked << " trees with <= 8 vertices checked";
}

// 6. cumulants
void cumulants(Outcome& o) {
  const Problem p = testing::rademacher();
  const double k2 = joint_cumulant(p, std::vector<int>{1, 1});
  const double k4 = joint_cumulant(p, std::vector<int>{1, 1, 1, 1});
  const double k6 = joint_cumulant(p, std::vector<int>{1, 1, 1, 1, 1, 1});
  o.require(std::abs(k2 - 1) <= 1e-12 && std::abs(k4 + 2) <= 1e-12 && std::abs(k6 - 16) <= 1e-12, "Rademacher cumulants");
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Problem q = testing::random_problem(rng, 3 + trial % 4, 1 + trial % 3);
    const CouplingTable table = cumulant_table(q, 6);
    for (const auto& [labels, value] : table.entries()) {
      (void)value;
      worst = std::max(worst, std::abs(moment_from_cumulants(table, labels) - joint_moment(q, labels)));
    }
  }
  o.require(worst <= 1e-10, "moment round trip");
  o.detail << "kappa2,4,6 = " << k2 << ", " << k4 << ", " << k6 << "; max round-trip error " << worst;
}

// 7. Jacobian, regression form of sigma, exp(1 + lambda_0)
void identities(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.15, 0.15);
  double jac = 0.0, sigma = 0.0, partition = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 1 + trial % 3;
    const auto np = normalize(testing::random_problem(rng, k + 3, k)).problem;
    const Problem& p = np.problem();
    jac = std::max(jac, (jacobian_at_zero(p) - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff());

    const auto s = sigma_coefficients(np, trial % 2 ? Basis::cumulant : Basis::moment, 2).output(k + 1);
    TruncatedSeries regression = TruncatedSeries::constant(k, 1, expectation(p, *p.s));
    for (int i = 0; i < k; ++i) {
      regression.add_to(MultiIndex::unit(k, i), joint_moment(p, std::vector<int>{i + 1, k + 1}));
    }
    sigma = std::max(sigma, std::abs(s.constant_term() - expectation(p, *p.s)));
    sigma = std::max(sigma, max_abs_difference(s.truncated(1), regression));

    std::vector<double> rho(static_cast<std::size_t>(k));
    for (double& v : rho) v = u(rng);
    const auto sol = solve_exact(np, rho);
    double z = 0.0;
    for (int x = 0; x < p.n(); ++x) {
      double e = 0.0;
      for (int i = 0; i < k; ++i) e -= sol.lambda[static_cast<std::size_t>(i)] * p.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      z += p.q[static_cast<std::size_t>(x)] * std::exp(e);
    }
    partition = std::max(partition, std::abs(std::exp(1.0 + sol.lambda0) - z));
  }
  o.require(jac <= 1e-8, "Jacobian");
  o.require(sigma <= 1e-10, "sigma regression form");
  o.require(partition <= 1e-10, "exp(1 + lambda_0) identity");
  o.detail << "Jacobian error " << jac << ", sigma linear-part error " << sigma << ", lambda'_0 identity error " << partition;
}

// 8. literal tree sums vs the engine, and vs the oracle
void sign_convention(Outcome& o) {
  std::mt19937_64 rng(8);
  std::vector<NormalizedProblem> problems{binary()};
  for (int i = 0; i < 3; ++i) problems.push_back(normalize(testing::random_problem(rng, 5, 2)).problem);
  double worst = 0.0;
  for (const auto& np : problems) {
    const int d = np.k() == 1 ? 6 : 4;
    for (Basis b : {Basis::moment, Basis::cumulant}) {
      const auto table = expand(np, b, d);
      for (int j = b == Basis::moment ? 0 : 1; j <= np.k() + 1; ++j) {
        worst = std::max(worst, max_abs_difference(tree_sum_coefficients(np, b, j, d), table.output(j)));
      }
    }
  }
  o.require(worst <= 1e-12, "tree sum vs engine");

  const auto np = binary();
  CoefficientTable literal;
  literal.basis = Basis::moment;
  literal.order = 6;
  literal.variables = 1;
  for (int j = 0; j <= 2; ++j) literal.outputs.emplace(j, tree_sum_coefficients(np, Basis::moment, j, 6));
  VerifyOptions opts;
  const auto report = verify_series(np, literal, opts);
  o.require(report.slope && *report.slope >= 6.5, "literal table vs oracle");
  o.detail << "max |tree sum - engine| " << worst << "; literal-table oracle slope " << (report.slope ? *report.slope : NAN);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"closed-form binary coefficients", closed_form},
      {"moment/cumulant basis equivalence", basis_equivalence},
      {"oracle convergence order", convergence_order},
      {"height-truncated sum = fixed-point iterate", height_sum_equality},
      {"automorphisms and orbit-stabilizer", automorphisms},
      {"cumulant correctness", cumulants},
      {"Jacobian, regression and lambda'_0 identities", identities},
      {"sign convention: tree sums = engine = oracle", sign_convention},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s  %s  [%s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
