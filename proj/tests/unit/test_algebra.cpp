#include <doctest.h>

#include <random>

#include "maxent/algebra.hpp"
#include "maxent/errors.hpp"

using namespace maxent;

namespace {

TruncatedSeries x(int k, int d, int i) { return TruncatedSeries::variable(k, d, i); }
TruncatedSeries one(int k, int d) { return TruncatedSeries::constant(k, d, 1.0); }

TruncatedSeries random_series(std::mt19937_64& rng, int k, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s(k, d);
  for (const auto& mi : all_multi_indices(k, d)) s.set(mi, u(rng));
  return s;
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("multi-index degree and graded-lex order") {
    const MultiIndex a{2, 0};
    const MultiIndex b{1, 1};
    const MultiIndex c{0, 1};
    CHECK(a.degree() == 2);
    CHECK(c < b);  // lower degree first
    CHECK(a < b);  // same degree: larger leading exponent first
    CHECK(a + c == MultiIndex{2, 1});
    CHECK(all_multi_indices(2, 2).size() == 6);  // every degree up to 2
    CHECK(all_multi_indices(3, 3).size() == 20);
  }

  TEST_CASE("(1 + rho)(1 - rho) at degree 2 is 1 - rho^2") {
    const auto p = series_mul(one(1, 2) + x(1, 2, 0), one(1, 2) - x(1, 2, 0));
    CHECK(p.coefficient(MultiIndex{0}) == 1.0);
    CHECK(p.coefficient(MultiIndex{1}) == 0.0);
    CHECK(p.coefficient(MultiIndex{2}) == -1.0);
    CHECK(p.terms().size() == 2);
  }

  TEST_CASE("products above the truncation degree are dropped") {
    const auto p = series_mul(x(1, 1, 0), x(1, 1, 0));
    CHECK(p.empty());
  }

  TEST_CASE("(rho1 + rho2)^2") {
    const auto s = x(2, 2, 0) + x(2, 2, 1);
    const auto p = series_mul(s, s);
    CHECK(p.coefficient(MultiIndex{2, 0}) == 1.0);
    CHECK(p.coefficient(MultiIndex{1, 1}) == 2.0);
    CHECK(p.coefficient(MultiIndex{0, 2}) == 1.0);
    CHECK(series_pow(s, 2).terms() == p.terms());
  }

  TEST_CASE("mismatched variables or degree are rejected") {
    CHECK_THROWS_AS(series_add(x(1, 2, 0), x(2, 2, 0)), DataError);
    CHECK_THROWS_AS(series_mul(x(1, 2, 0), x(1, 3, 0)), DataError);
  }

  TEST_CASE("ring laws on random series up to degree 6") {
    std::mt19937_64 rng(11);
    for (int k = 1; k <= 3; ++k) {
      const int d = 6;
      const auto a = random_series(rng, k, d);
      const auto b = random_series(rng, k, d);
      const auto c = random_series(rng, k, d);
      CHECK(max_abs_difference((a * b) * c, a * (b * c)) <= 1e-12);
      CHECK(max_abs_difference(a * (b + c), a * b + a * c) <= 1e-12);
      CHECK(max_abs_difference(a * b, b * a) <= 1e-12);
    }
  }

  TEST_CASE("evaluation and truncation") {
    auto s = one(2, 3) + 2.0 * x(2, 3, 0) * x(2, 3, 1);
    const std::vector<double> pt{0.5, -2.0};
    CHECK(s.evaluate(pt) == doctest::Approx(-1.0));
    CHECK(s.truncated(1).terms().size() == 1);
    CHECK(s.valuation() == 0);
    CHECK((s - one(2, 3)).valuation() == 2);
  }

  TEST_CASE("apply_multilinear examples") {
    const int k = 1, d = 3;
    SymmetricCoefficients<double> t1(1, 1);
    t1.set({0}, 2.5);
    const std::vector<SeriesVector> arg1{{x(k, d, 0)}};
    const auto r1 = apply_multilinear(t1, arg1);
    CHECK(r1.coefficient(MultiIndex{1}) == 2.5);

    SymmetricCoefficients<double> t2(1, 2);
    t2.set({0, 0}, 1.0);
    const std::vector<SeriesVector> arg2{{x(k, d, 0)}, {x(k, d, 0)}};
    const auto r2 = apply_multilinear(t2, arg2);
    CHECK(r2.coefficient(MultiIndex{2}) == 1.0);
    CHECK(r2.terms().size() == 1);

    CHECK_THROWS_AS(apply_multilinear(t2, arg1), DataError);
  }

  TEST_CASE("apply_multilinear is symmetric and matches the symmetric power") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int m = 3, k = 2, d = 4, l = 3;
    SymmetricCoefficients<double> theta(m, l);
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b)
        for (int c = b; c < m; ++c) theta.set({a, b, c}, u(rng));
    std::vector<SeriesVector> args(3);
    for (auto& v : args)
      for (int i = 0; i < m; ++i) v.push_back(random_series(rng, k, d));
    const auto base = apply_multilinear(theta, args);
    std::vector<SeriesVector> permuted{args[2], args[0], args[1]};
    CHECK(max_abs_difference(base, apply_multilinear(theta, permuted)) <= 1e-14);

    const std::vector<SeriesVector> same(3, args[0]);
    CHECK(max_abs_difference(apply_multilinear(theta, same), apply_symmetric_power(theta, args[0])) <= 1e-12);
  }

  TEST_CASE("symmetric coefficients store sorted keys") {
    SymmetricCoefficients<double> t(3, 3);
    t.set({2, 0, 1}, 4.0);
    CHECK(t.entries().size() == 1);
    CHECK(t.entries().begin()->first == std::vector<int>{0, 1, 2});
    REQUIRE(t.find({1, 2, 0}) != nullptr);
    CHECK(*t.find({1, 2, 0}) == 4.0);
    CHECK_THROWS_AS(t.set({0, 1}, 1.0), DataError);
    CHECK(multinomial_of_sorted(std::vector<int>{0, 0, 1}) == 3.0);
  }
}
