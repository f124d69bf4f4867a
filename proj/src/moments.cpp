#include "maxent/moments.hpp"

#include <algorithm>
#include <mutex>

#include "maxent/algebra.hpp"
#include "maxent/errors.hpp"

namespace maxent {

namespace {

int max_label_of(const Problem& p) { return p.has_target() ? p.k() + 1 : p.k(); }

void check_labels(const Problem& p, std::span<const int> labels, int min_label) {
  const int hi = max_label_of(p);
  for (int l : labels) {
    if (l < min_label || l > hi) {
      throw DataError("label " + std::to_string(l) + " out of range " + std::to_string(min_label) + ".." +
                      std::to_string(hi) + (l == p.k() + 1 ? " (problem has no target)" : ""));
    }
  }
}

double raw_moment(const Problem& p, std::span<const int> labels) {
  double total = 0.0;
  for (int s = 0; s < p.n(); ++s) {
    double prod = p.q[static_cast<std::size_t>(s)];
    for (int l : labels) prod *= p.value(l, s);
    total += prod;
  }
  return total;
}

void restricted_growth(int n, int pos, int max_block, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (pos == n) {
    out.push_back(current);
    return;
  }
  for (int b = 0; b <= max_block + 1; ++b) {
    current[static_cast<std::size_t>(pos)] = b;
    restricted_growth(n, pos + 1, std::max(max_block, b), current, out);
  }
}

// Calls fn(sorted multiset) for every multiset of labels in [lo, hi] with size in [1, max_size].
template <class Fn>
void for_each_multiset(int lo, int hi, int max_size, Fn&& fn) {
  std::vector<int> current;
  auto rec = [&](auto&& self, int start) -> void {
    if (!current.empty()) fn(current);
    if (static_cast<int>(current.size()) == max_size) return;
    for (int l = start; l <= hi; ++l) {
      current.push_back(l);
      self(self, l);
      current.pop_back();
    }
  };
  rec(rec, lo);
}

// Partition sum shared by the forward and inverse formulas: for each set
// partition, weight(#blocks) * prod over blocks of block_value(sorted block labels).
template <class BlockValue>
double partition_sum(std::span<const int> labels, bool mobius, BlockValue&& block_value) {
  const int n = static_cast<int>(labels.size());
  double total = 0.0;
  std::vector<std::vector<int>> blocks;
  for (const auto& rgs : set_partitions(n)) {
    const int nblocks = 1 + *std::max_element(rgs.begin(), rgs.end());
    blocks.assign(static_cast<std::size_t>(nblocks), {});
    for (int j = 0; j < n; ++j) blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(j)])].push_back(labels[static_cast<std::size_t>(j)]);
    double term = 1.0;
    if (mobius) term = factorial(nblocks - 1) * ((nblocks - 1) % 2 == 0 ? 1.0 : -1.0);
    for (auto& block : blocks) {
      std::sort(block.begin(), block.end());
      term *= block_value(block);
      if (term == 0.0) break;
    }
    total += term;
  }
  return total;
}

}  // namespace

const std::vector<std::vector<int>>& set_partitions(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::vector<int>>> cache;
  if (n < 0) throw DataError("negative partition size");
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  if (n == 0) {
    out.emplace_back();
  } else {
    std::vector<int> current(static_cast<std::size_t>(n), 0);
    restricted_growth(n, 1, 0, current, out);
  }
  return cache.emplace(n, std::move(out)).first->second;
}

double joint_moment(const Problem& p, std::span<const int> labels) {
  check_labels(p, labels, 0);
  return raw_moment(p, labels);
}

double joint_cumulant(const Problem& p, std::span<const int> labels) {
  if (labels.empty()) throw DataError("joint cumulant of an empty multiset");
  check_labels(p, labels, 1);
  return partition_sum(labels, true, [&](const std::vector<int>& block) { return raw_moment(p, block); });
}

double CouplingTable::at(std::vector<int> labels) const {
  std::sort(labels.begin(), labels.end());
  return at_sorted(labels);
}

double CouplingTable::at_sorted(const std::vector<int>& sorted_labels) const {
  for (int l : sorted_labels) {
    if (l < min_label_ || l > max_label_) {
      throw DataError("label " + std::to_string(l) + " out of range " + std::to_string(min_label_) + ".." +
                      std::to_string(max_label_));
    }
  }
  if (basis_ == Basis::moment) {
    auto first = std::upper_bound(sorted_labels.begin(), sorted_labels.end(), 0);
    if (first == sorted_labels.end()) return 1.0;
    if (first != sorted_labels.begin()) return at_sorted(std::vector<int>(first, sorted_labels.end()));
  } else if (sorted_labels.empty()) {
    throw DataError("joint cumulant of an empty multiset");
  }
  if (static_cast<int>(sorted_labels.size()) > max_size_) {
    throw DataError("multiset of size " + std::to_string(sorted_labels.size()) + " exceeds table size " +
                    std::to_string(max_size_));
  }
  auto it = entries_.find(sorted_labels);
  return it == entries_.end() ? 0.0 : it->second;
}

CouplingTable moment_table(const Problem& p, int max_size) {
  CouplingTable table(Basis::moment, 0, max_label_of(p), max_size);
  // label 0 is the constant function, so only labels >= 1 are stored
  for_each_multiset(1, table.max_label_, max_size,
                    [&](const std::vector<int>& m) { table.entries_.emplace(m, raw_moment(p, m)); });
  return table;
}

CouplingTable cumulant_table(const Problem& p, int max_size) {
  const CouplingTable moments = moment_table(p, max_size);
  CouplingTable table(Basis::cumulant, 1, max_label_of(p), max_size);
  for_each_multiset(1, table.max_label_, max_size, [&](const std::vector<int>& m) {
    table.entries_.emplace(m, partition_sum(m, true, [&](const std::vector<int>& block) { return moments.at_sorted(block); }));
  });
  return table;
}

double moment_from_cumulants(const CouplingTable& cumulants, std::span<const int> labels) {
  if (cumulants.basis() != Basis::cumulant) throw DataError("moment_from_cumulants needs a cumulant table");
  if (labels.empty()) return 1.0;
  return partition_sum(labels, false, [&](const std::vector<int>& block) { return cumulants.at_sorted(block); });
}

}  // namespace maxent
