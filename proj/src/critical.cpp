#include "maxent/critical.hpp"

#include <cmath>
#include <numeric>

#include "maxent/errors.hpp"
#include "maxent/trees.hpp"

namespace maxent {

TensorFamily::TensorFamily(int dimension, int variables, int order)
    : dimension_(dimension), variables_(variables), order_(order) {
  if (dimension < 1) throw DataError("tensor family needs at least one label");
  if (order < 0) throw DataError("negative truncation order");
}

int TensorFamily::max_degree() const { return degrees_.empty() ? 0 : degrees_.rbegin()->first; }

void TensorFamily::set(std::vector<int> labels, TruncatedSeries value) {
  if (labels.empty()) throw DataError("tensor entries need at least one label");
  if (value.variables() != variables_ || value.max_degree() != order_) {
    throw DataError("tensor entry series does not match the family's variables/order");
  }
  const int degree = static_cast<int>(labels.size());
  auto it = degrees_.try_emplace(degree, dimension_, degree).first;
  it->second.set(std::move(labels), std::move(value));
}

const TruncatedSeries* TensorFamily::find(const std::vector<int>& sorted_labels) const {
  auto it = degrees_.find(static_cast<int>(sorted_labels.size()));
  return it == degrees_.end() ? nullptr : it->second.find_sorted(sorted_labels);
}

void TensorFamily::validate() const {
  if (auto it = degrees_.find(1); it != degrees_.end()) {
    for (const auto& [labels, series] : it->second.entries()) {
      if (series.constant_term() != 0.0) {
        throw DataError("linear coefficient for label " + std::to_string(labels[0]) + " does not vanish at x = 0");
      }
    }
  }
  if (auto it = degrees_.find(2); it != degrees_.end()) {
    for (const auto& [labels, series] : it->second.entries()) {
      if (!series.empty()) throw DataError("families with a quadratic perturbation (T_2 != 0) are not supported");
    }
  }
}

std::map<int, SymmetricCoefficients<double>> TensorFamily::at(std::span<const double> x) const {
  std::map<int, SymmetricCoefficients<double>> out;
  for (const auto& [degree, coeffs] : degrees_) {
    SymmetricCoefficients<double> values(dimension_, degree);
    for (const auto& [labels, series] : coeffs.entries()) {
      const double v = series.evaluate(x);
      if (v != 0.0) values.set(labels, v);
    }
    out.emplace(degree, std::move(values));
  }
  return out;
}

namespace {

// theta at a fixed x, stored densely over ordered tuples for the contraction steps.
struct DenseFamily {
  int m = 0;
  std::vector<double> linear;
  std::map<int, std::vector<double>> tensors;  // degree l >= 3 -> m^l entries

  DenseFamily(const TensorFamily& family, std::span<const double> x) : m(family.dimension()) {
    family.validate();
    linear.assign(static_cast<std::size_t>(m), 0.0);
    for (const auto& [degree, coeffs] : family.at(x)) {
      if (degree == 1) {
        for (const auto& [labels, v] : coeffs.entries()) linear[static_cast<std::size_t>(labels[0])] = v;
        continue;
      }
      if (degree < 3 || coeffs.entries().empty()) continue;
      std::size_t size = 1;
      for (int i = 0; i < degree; ++i) size *= static_cast<std::size_t>(m);
      std::vector<double> dense(size, 0.0);
      std::vector<int> tuple(static_cast<std::size_t>(degree));
      for (std::size_t flat = 0; flat < size; ++flat) {
        std::size_t rest = flat;
        for (int a = degree - 1; a >= 0; --a) {
          tuple[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(m));
          rest /= static_cast<std::size_t>(m);
        }
        if (const double* v = coeffs.find(tuple)) dense[flat] = *v;
      }
      tensors.emplace(degree, std::move(dense));
    }
  }

  std::vector<double> gradient(std::span<const double> y) const {
    std::vector<double> g(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = linear[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)];
    for (const auto& [degree, dense] : tensors) {
      const double scale = 1.0 / factorial(degree - 1);
      const std::size_t block = dense.size() / static_cast<std::size_t>(m);
      for (int i = 0; i < m; ++i) {
        double total = 0.0;
        for (std::size_t rest = 0; rest < block; ++rest) {
          const double c = dense[static_cast<std::size_t>(i) * block + rest];
          if (c == 0.0) continue;
          double prod = c;
          std::size_t r = rest;
          for (int a = 0; a < degree - 1; ++a) {
            prod *= y[r % static_cast<std::size_t>(m)];
            r /= static_cast<std::size_t>(m);
          }
          total += prod;
        }
        g[static_cast<std::size_t>(i)] += scale * total;
      }
    }
    return g;
  }
};

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

std::vector<double> gradient(const TensorFamily& family, std::span<const double> x, std::span<const double> y) {
  if (static_cast<int>(y.size()) != family.dimension()) throw DataError("point has wrong dimension");
  return DenseFamily(family, x).gradient(y);
}

std::vector<double> fixed_point_iterate(const TensorFamily& family, std::span<const double> x, int steps) {
  if (static_cast<int>(x.size()) != family.variables()) throw DataError("parameter point has wrong dimension");
  if (steps < 0) throw DataError("negative iteration count");
  const DenseFamily dense(family, x);
  std::vector<double> y(static_cast<std::size_t>(family.dimension()), 0.0);
  double first_step = 0.0;
  int strikes = 0;
  for (int h = 0; h < steps; ++h) {
    const auto g = dense.gradient(y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g[i];
    const double size = norm(y);
    if (!std::isfinite(size)) throw NumericalError("fixed-point iteration overflowed; x is outside the contraction region");
    if (h == 0) {
      first_step = size;
      continue;
    }
    strikes = size > 10.0 * first_step ? strikes + 1 : 0;
    if (strikes >= 3) throw NumericalError("fixed-point iteration diverges; x is outside the contraction region");
  }
  return y;
}

std::vector<double> height_truncated_sum(const TensorFamily& family, std::span<const double> x, int height) {
  if (static_cast<int>(x.size()) != family.variables()) throw DataError("parameter point has wrong dimension");
  if (height < 0) throw DataError("negative height");
  family.validate();
  const auto theta = family.at(x);
  const auto m = static_cast<std::size_t>(family.dimension());
  std::vector<double> sums(m, 0.0);  // height 0: no trees
  for (int h = 1; h <= height; ++h) {
    std::vector<double> next(m, 0.0);
    for (const auto& [degree, coeffs] : theta) {
      if (degree == 2) continue;
      for (const auto& [key, value] : coeffs.entries()) {
        if (degree == 1) {
          next[static_cast<std::size_t>(key[0])] -= value;  // a single leaf
          continue;
        }
        // a top vertex labeled `top` whose children carry the remaining labels
        for (std::size_t pos = 0; pos < key.size(); ++pos) {
          if (pos > 0 && key[pos] == key[pos - 1]) continue;
          double weight = -value;
          std::size_t i = 0;
          bool skipped = false;
          while (i < key.size()) {
            std::size_t j = i;
            while (j < key.size() && key[j] == key[i]) ++j;
            int count = static_cast<int>(j - i);
            if (!skipped && i <= pos && pos < j) {
              --count;
              skipped = true;
            }
            weight *= std::pow(sums[static_cast<std::size_t>(key[i])], count) / factorial(count);
            i = j;
          }
          next[static_cast<std::size_t>(key[pos])] += weight;
        }
      }
    }
    sums = std::move(next);
  }
  return sums;
}

CritSeries crit_series(const TensorFamily& family, int max_order) {
  family.validate();
  if (max_order < 0 || max_order > family.order()) {
    throw DataError("crit_series order must lie in 0.." + std::to_string(family.order()));
  }
  const int m = family.dimension();
  const int k = family.variables();
  const int d = family.order();
  CritSeries out;
  out.coordinates.assign(static_cast<std::size_t>(m), TruncatedSeries(k, d));
  out.tree_counts.resize(static_cast<std::size_t>(m));

  std::vector<int> leaf_labels;
  std::vector<int> all_labels(static_cast<std::size_t>(m));
  std::iota(all_labels.begin(), all_labels.end(), 0);
  for (int l = 0; l < m; ++l) {
    const TruncatedSeries* s = family.find({l});
    if (s && !s->empty()) leaf_labels.push_back(l);
  }
  const int max_children = std::max(1, family.max_degree() - 1);
  const TreeCatalog catalog(leaf_labels, all_labels, max_order, max_children);

  std::vector<TruncatedSeries> weights(catalog.entries().size(), TruncatedSeries(k, d));
  std::vector<int> labels;
  for (std::size_t id = 0; id < catalog.entries().size(); ++id) {
    const auto& e = catalog.entries()[id];
    TruncatedSeries w;
    if (e.children.empty()) {
      w = -*family.find({e.label});
    } else {
      labels.assign(1, e.label);
      for (int c : e.children) labels.push_back(catalog.entry(c).label);
      std::sort(labels.begin(), labels.end());
      const TruncatedSeries* theta = family.find(labels);
      if (!theta || theta->empty()) continue;
      w = -*theta;
      for (int c : e.children) {
        w = w * weights[static_cast<std::size_t>(c)];
        if (w.empty()) break;
      }
      if (w.empty()) continue;
      w *= 1.0 / static_cast<double>(e.local_symmetry);
    }
    auto& counts = out.tree_counts[static_cast<std::size_t>(e.label)];
    for (const auto& [index, c] : w.terms()) {
      if (index.degree() <= max_order) ++counts[index];
    }
    out.coordinates[static_cast<std::size_t>(e.label)] += w;
    // only subtrees with fewer than max_order leaves can appear as children
    if (e.leaves < max_order) weights[id] = std::move(w);
  }
  for (auto& c : out.coordinates) c = c.truncated(max_order);
  return out;
}

PairingReduction reduce_pairing(const Eigen::MatrixXd& pairing, const TensorFamily& family, double tolerance) {
  const int m = family.dimension();
  if (pairing.rows() != m || pairing.cols() != m) throw DataError("pairing matrix has wrong shape");
  if (!pairing.isApprox(pairing.transpose(), 1e-12)) throw NumericalError("pairing is not symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pairing, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= tolerance) {
    throw NumericalError("pairing is not positive definite (smallest eigenvalue <= tolerance)");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(pairing);
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::MatrixXd basis = lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));

  TensorFamily reduced(m, family.variables(), family.order());
  for (const auto& [degree, coeffs] : family.degrees()) {
    // every sorted output tuple J; sum over ordered input tuples I
    std::vector<int> sorted_out;
    auto each_sorted = [&](auto&& self, int start) -> void {
      if (static_cast<int>(sorted_out.size()) == degree) {
        TruncatedSeries total(family.variables(), family.order());
        std::vector<int> in(static_cast<std::size_t>(degree), 0);
        while (true) {
          double factor = 1.0;
          for (int a = 0; a < degree && factor != 0.0; ++a) {
            factor *= basis(in[static_cast<std::size_t>(a)], sorted_out[static_cast<std::size_t>(a)]);
          }
          if (factor != 0.0) {
            if (const TruncatedSeries* t = coeffs.find(in)) total += *t * factor;
          }
          int a = degree - 1;
          while (a >= 0 && ++in[static_cast<std::size_t>(a)] == m) in[static_cast<std::size_t>(a--)] = 0;
          if (a < 0) break;
        }
        if (!total.empty()) reduced.set(sorted_out, std::move(total));
        return;
      }
      for (int l = start; l < m; ++l) {
        sorted_out.push_back(l);
        self(self, l);
        sorted_out.pop_back();
      }
    };
    each_sorted(each_sorted, 0);
  }
  return {std::move(reduced), basis};
}

}  // namespace maxent
