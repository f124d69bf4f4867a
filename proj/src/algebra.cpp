#include "maxent/algebra.hpp"

#include <cmath>
#include <sstream>

namespace maxent {

MultiIndex::MultiIndex(int variables) : size_(variables) {
  if (variables < 0 || variables > kMaxVariables) {
    throw DataError("multi-index supports at most " + std::to_string(kMaxVariables) + " variables");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::span<const int>(exponents.begin(), exponents.size())) {}

MultiIndex::MultiIndex(std::span<const int> exponents) : MultiIndex(static_cast<int>(exponents.size())) {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > 255) throw DataError("multi-index exponent out of range");
    exps_[i] = static_cast<std::uint8_t>(exponents[i]);
    degree_ += exponents[i];
  }
}

MultiIndex MultiIndex::unit(int variables, int i) {
  MultiIndex m(variables);
  m.increment(i);
  return m;
}

void MultiIndex::increment(int i, int by) {
  if (i < 0 || i >= size_) throw DataError("multi-index position out of range");
  const int next = exps_[static_cast<std::size_t>(i)] + by;
  if (next < 0 || next > 255) throw DataError("multi-index exponent out of range");
  exps_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(next);
  degree_ += by;
}

std::vector<int> MultiIndex::exponents() const {
  return std::vector<int>(exps_.begin(), exps_.begin() + size_);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < size_; ++i) os << (i ? "," : "") << static_cast<int>(exps_[static_cast<std::size_t>(i)]);
  os << ')';
  return os.str();
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size_ != b.size_) throw DataError("multi-index size mismatch");
  MultiIndex out(a.size_);
  for (int i = 0; i < a.size_; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const int e = a.exps_[u] + b.exps_[u];
    if (e > 255) throw DataError("multi-index exponent out of range");
    out.exps_[u] = static_cast<std::uint8_t>(e);
  }
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

bool operator==(const MultiIndex& a, const MultiIndex& b) {
  return a.size_ == b.size_ && a.exps_ == b.exps_;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  for (std::size_t i = 0; i < static_cast<std::size_t>(a.size_); ++i) {
    if (a.exps_[i] != b.exps_[i]) return b.exps_[i] <=> a.exps_[i];
  }
  return std::strong_ordering::equal;
}

namespace {

void fill_indices(int variables, int remaining, int position, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (position == variables - 1) {
    MultiIndex m = current;
    m.increment(position, remaining);
    out.push_back(m);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current.increment(position, e);
    fill_indices(variables, remaining - e, position + 1, current, out);
    current.increment(position, -e);
  }
}

}  // namespace

std::vector<MultiIndex> all_multi_indices(int variables, int degree) {
  std::vector<MultiIndex> out;
  if (variables == 0) {
    out.emplace_back(0);
    return out;
  }
  for (int d = 0; d <= degree; ++d) {
    MultiIndex current(variables);
    fill_indices(variables, d, 0, current, out);
  }
  return out;
}

TruncatedSeries::TruncatedSeries(int variables, int max_degree) : variables_(variables), max_degree_(max_degree) {
  if (variables < 0 || variables > kMaxVariables) throw DataError("series variable count out of range");
  if (max_degree < 0) throw DataError("series truncation degree must be nonnegative");
}

TruncatedSeries TruncatedSeries::constant(int variables, int max_degree, double c) {
  TruncatedSeries s(variables, max_degree);
  s.set(MultiIndex(variables), c);
  return s;
}

TruncatedSeries TruncatedSeries::variable(int variables, int max_degree, int i, double scale) {
  TruncatedSeries s(variables, max_degree);
  s.set(MultiIndex::unit(variables, i), scale);
  return s;
}

double TruncatedSeries::coefficient(const MultiIndex& index) const {
  auto it = terms_.find(index);
  return it == terms_.end() ? 0.0 : it->second;
}

double TruncatedSeries::constant_term() const { return coefficient(MultiIndex(variables_)); }

void TruncatedSeries::set(const MultiIndex& index, double value) {
  if (index.size() != variables_) throw DataError("multi-index size does not match series");
  if (index.degree() > max_degree_) return;
  if (value == 0.0) {
    terms_.erase(index);
  } else {
    terms_[index] = value;
  }
}

void TruncatedSeries::add_to(const MultiIndex& index, double value) {
  if (index.size() != variables_) throw DataError("multi-index size does not match series");
  if (index.degree() > max_degree_ || value == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(index, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int TruncatedSeries::valuation() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

double TruncatedSeries::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != variables_) throw DataError("evaluation point has wrong dimension");
  double total = 0.0;
  for (const auto& [index, c] : terms_) {
    double m = c;
    for (int i = 0; i < variables_; ++i) {
      for (int e = 0; e < index[i]; ++e) m *= point[static_cast<std::size_t>(i)];
    }
    total += m;
  }
  return total;
}

TruncatedSeries TruncatedSeries::truncated(int degree) const {
  TruncatedSeries out(variables_, std::min(degree, max_degree_));
  for (const auto& [index, c] : terms_) {
    if (index.degree() <= out.max_degree_) out.terms_.emplace_hint(out.terms_.end(), index, c);
  }
  return out;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& other) const {
  if (variables_ != other.variables_ || max_degree_ != other.max_degree_) {
    throw DataError("series mismatch: (k=" + std::to_string(variables_) + ", d=" + std::to_string(max_degree_) +
                    ") vs (k=" + std::to_string(other.variables_) + ", d=" + std::to_string(other.max_degree_) + ")");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  check_compatible(other);
  for (const auto& [index, c] : other.terms_) add_to(index, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  check_compatible(other);
  for (const auto& [index, c] : other.terms_) add_to(index, -c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.second *= scale;
  return *this;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  out *= -1.0;
  return out;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries out(a.variables_, a.max_degree_);
  for (const auto& [ia, ca] : a.terms_) {
    // terms are graded, so once the degree budget is exhausted the rest of b is too high
    const int budget = a.max_degree_ - ia.degree();
    if (budget < 0) break;
    for (const auto& [ib, cb] : b.terms_) {
      if (ib.degree() > budget) break;
      out.add_to(ia + ib, ca * cb);
    }
  }
  return out;
}

double max_abs_difference(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  double worst = 0.0;
  for (const auto& [index, c] : a.terms_) worst = std::max(worst, std::abs(c - b.coefficient(index)));
  for (const auto& [index, c] : b.terms_) {
    if (!a.terms_.contains(index)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries series_pow(const TruncatedSeries& a, int n) {
  if (n < 0) throw DataError("negative series power");
  TruncatedSeries result = TruncatedSeries::constant(a.variables(), a.max_degree(), 1.0);
  TruncatedSeries base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double multinomial_of_sorted(std::span<const int> sorted_labels) {
  double denom = 1.0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < sorted_labels.size(); ++i) {
    run = (i > 0 && sorted_labels[i] == sorted_labels[i - 1]) ? run + 1 : 1;
    denom *= static_cast<double>(run);
  }
  return factorial(static_cast<int>(sorted_labels.size())) / denom;
}

namespace {

void check_arguments(int dimension, std::span<const SeriesVector> args, int& variables, int& degree) {
  variables = -1;
  for (const auto& arg : args) {
    if (static_cast<int>(arg.size()) != dimension) throw DataError("multilinear argument has wrong dimension");
    for (const auto& s : arg) {
      if (variables < 0) {
        variables = s.variables();
        degree = s.max_degree();
      } else if (s.variables() != variables || s.max_degree() != degree) {
        throw DataError("multilinear arguments disagree on series shape");
      }
    }
  }
}

}  // namespace

TruncatedSeries apply_multilinear(const SymmetricCoefficients<double>& theta, std::span<const SeriesVector> args) {
  if (static_cast<int>(args.size()) != theta.degree()) {
    throw DataError("apply_multilinear: " + std::to_string(args.size()) + " arguments for degree " +
                    std::to_string(theta.degree()));
  }
  if (args.empty()) throw DataError("apply_multilinear needs at least one argument");
  int variables = 0;
  int degree = 0;
  check_arguments(theta.dimension(), args, variables, degree);
  TruncatedSeries out(variables, degree);
  for (const auto& [key, value] : theta.entries()) {
    std::vector<int> perm = key;
    do {
      TruncatedSeries term = args[0][static_cast<std::size_t>(perm[0])];
      for (std::size_t j = 1; j < perm.size() && !term.empty(); ++j) {
        term = term * args[j][static_cast<std::size_t>(perm[j])];
      }
      term *= value;
      out += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

TruncatedSeries apply_symmetric_power(const SymmetricCoefficients<double>& theta, const SeriesVector& y) {
  const SeriesVector* single = &y;
  int variables = 0;
  int degree = 0;
  check_arguments(theta.dimension(), std::span<const SeriesVector>(single, 1), variables, degree);
  TruncatedSeries out(variables, degree);
  // powers[label][e] = y[label]^e, built on demand
  std::vector<std::vector<TruncatedSeries>> powers(y.size());
  auto power = [&](int label, int e) -> const TruncatedSeries& {
    auto& cache = powers[static_cast<std::size_t>(label)];
    if (cache.empty()) cache.push_back(TruncatedSeries::constant(variables, degree, 1.0));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * y[static_cast<std::size_t>(label)]);
    return cache[static_cast<std::size_t>(e)];
  };
  for (const auto& [key, value] : theta.entries()) {
    TruncatedSeries term = TruncatedSeries::constant(variables, degree, value * multinomial_of_sorted(key));
    std::size_t i = 0;
    while (i < key.size() && !term.empty()) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      term = term * power(key[i], static_cast<int>(j - i));
      i = j;
    }
    out += term;
  }
  return out;
}

}  // namespace maxent
