#include "maxent/trees.hpp"

#include <algorithm>
#include <numeric>

#include "maxent/errors.hpp"

namespace maxent {

namespace {

constexpr std::size_t kCatalogLimit = 50'000'000;

std::vector<int> label_range(int lo, int hi) {
  std::vector<int> out;
  for (int l = lo; l <= hi; ++l) out.push_back(l);
  return out;
}

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

int node_height(const TreeNode& node) {
  int h = 0;
  for (const auto& c : node.children) h = std::max(h, node_height(c));
  return 1 + h;
}

int node_count(const TreeNode& node) {
  int total = 1;
  for (const auto& c : node.children) total += node_count(c);
  return total;
}

int leaf_count(const TreeNode& node) {
  if (node.is_leaf()) return 1;
  int total = 0;
  for (const auto& c : node.children) total += leaf_count(c);
  return total;
}

void count_leaves(const TreeNode& node, MultiIndex& index) {
  if (node.is_leaf()) {
    if (node.label >= 1 && node.label <= index.size()) index.increment(node.label - 1);
    return;
  }
  for (const auto& c : node.children) count_leaves(c, index);
}

std::uint64_t node_aut(const TreeNode& node) {
  std::uint64_t aut = 1;
  std::size_t i = 0;
  while (i < node.children.size()) {
    std::size_t j = i;
    while (j < node.children.size() && node.children[j] == node.children[i]) ++j;
    aut *= factorial_u64(static_cast<int>(j - i));
    for (std::size_t m = i; m < j; ++m) aut *= node_aut(node.children[m]);
    i = j;
  }
  return aut;
}

struct AmplitudeWalk {
  const CouplingTable& table;
  LeafSign sign;

  double operator()(const TreeNode& node) const {
    if (node.is_leaf()) return sign == LeafSign::include ? -1.0 : 1.0;
    std::vector<int> labels;
    labels.reserve(node.children.size() + 1);
    labels.push_back(node.label);
    double value = 1.0;
    for (const auto& c : node.children) {
      labels.push_back(c.label);
      value *= (*this)(c);
    }
    const int degree = static_cast<int>(labels.size());
    const double coupling = table.at(std::move(labels));
    return value * ((degree + 1) % 2 == 0 ? 1.0 : -1.0) * coupling;
  }
};

}  // namespace

TreeFamilySpec moment_tree_family(int k, int output) {
  if (k < 1) throw DataError("moment trees need k >= 1");
  if (output < 0 || output > k + 1) throw DataError("moment tree output out of range");
  TreeFamilySpec spec;
  spec.label_count = k + 2;
  spec.leaf_labels = label_range(1, k);
  spec.internal_labels = label_range(0, k);
  spec.output = output;
  spec.root_min_children = output == k + 1 ? 1 : 2;
  spec.constant_carrier = output != 0;
  return spec;
}

TreeFamilySpec cumulant_tree_family(int k, int output) {
  if (k < 1) throw DataError("cumulant trees need k >= 1");
  if (output < 1 || output > k + 1) throw DataError("cumulant tree output out of range");
  TreeFamilySpec spec;
  spec.label_count = k + 2;
  spec.leaf_labels = label_range(1, k);
  spec.internal_labels = label_range(1, k);
  spec.output = output;
  spec.root_min_children = output == k + 1 ? 1 : 2;
  spec.constant_carrier = true;
  return spec;
}

std::string canonicalize(TreeNode& node) {
  if (node.children.empty()) return std::to_string(node.label);
  std::vector<std::pair<std::string, std::size_t>> keyed;
  keyed.reserve(node.children.size());
  for (std::size_t i = 0; i < node.children.size(); ++i) keyed.emplace_back(canonicalize(node.children[i]), i);
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    const int la = node.children[a.second].label;
    const int lb = node.children[b.second].label;
    return la != lb ? la < lb : a.first < b.first;
  });
  std::vector<TreeNode> sorted;
  sorted.reserve(node.children.size());
  std::string out = std::to_string(node.label) + "(";
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    sorted.push_back(std::move(node.children[keyed[i].second]));
    out += (i ? "," : "") + keyed[i].first;
  }
  node.children = std::move(sorted);
  return out + ")";
}

LabeledRootedTree::LabeledRootedTree(TreeNode root, bool constant_carrier)
    : root_(std::move(root)), constant_carrier_(constant_carrier) {
  if (constant_carrier_ && !root_.children.empty()) throw DataError("constant carrier must be the 2-vertex tree");
  encoding_ = canonicalize(root_);
  if (constant_carrier_) encoding_ = "[" + encoding_ + "]";
}

int LabeledRootedTree::vertex_count() const { return node_count(root_) + 1; }

int LabeledRootedTree::height() const { return node_height(root_); }

int LabeledRootedTree::order() const { return constant_carrier_ ? 0 : leaf_count(root_); }

MultiIndex LabeledRootedTree::leaf_index(int k) const {
  MultiIndex index(k);
  if (!constant_carrier_) count_leaves(root_, index);
  return index;
}

std::uint64_t aut_size(const LabeledRootedTree& tree) { return node_aut(tree.root()); }

Amplitude amplitude(const LabeledRootedTree& tree, const CouplingTable& table, int k, LeafSign sign) {
  Amplitude a;
  a.aut_size = aut_size(tree);
  a.leaf_index = tree.leaf_index(k);
  if (tree.is_constant_carrier()) {
    a.value = table.at({tree.output()});  // degree 1: (-1)^2 * table entry
  } else {
    a.value = AmplitudeWalk{table, sign}(tree.root());
  }
  return a;
}

TreeCatalog::TreeCatalog(std::vector<int> leaf_labels, std::vector<int> internal_labels, int max_leaves, int max_children)
    : leaf_labels_(std::move(leaf_labels)),
      internal_labels_(std::move(internal_labels)),
      max_leaves_(max_leaves),
      max_children_(max_children) {
  if (max_leaves < 0) throw DataError("negative leaf budget");
  std::sort(leaf_labels_.begin(), leaf_labels_.end());
  std::sort(internal_labels_.begin(), internal_labels_.end());
  first_with_leaves_.assign(static_cast<std::size_t>(max_leaves + 2), 0);
  for (int n = 1; n <= max_leaves; ++n) {
    for (int m = n; m <= max_leaves + 1; ++m) first_with_leaves_[static_cast<std::size_t>(m)] = static_cast<int>(entries_.size());
    if (n == 1) {
      for (int l : leaf_labels_) entries_.push_back({l, {}, 1, 1, 1, 1, 1});
    } else if (max_children_ == 0 || max_children_ >= 2) {
      std::vector<std::vector<int>> multisets;
      collect(n, 2, max_children_, multisets);
      for (int l : internal_labels_) {
        for (const auto& children : multisets) {
          Entry e{l, children, n, 0, 1, 1, 1};
          std::size_t i = 0;
          while (i < children.size()) {
            std::size_t j = i;
            while (j < children.size() && children[j] == children[i]) ++j;
            e.local_symmetry *= factorial_u64(static_cast<int>(j - i));
            i = j;
          }
          e.aut = e.local_symmetry;
          for (int c : children) {
            const Entry& child = entries_[static_cast<std::size_t>(c)];
            e.height = std::max(e.height, child.height);
            e.vertices += child.vertices;
            e.aut *= child.aut;
          }
          e.height += 1;
          entries_.push_back(std::move(e));
        }
      }
    }
    if (entries_.size() > kCatalogLimit) throw NumericalError("tree catalog exceeds " + std::to_string(kCatalogLimit) + " entries");
  }
  first_with_leaves_[static_cast<std::size_t>(max_leaves + 1)] = static_cast<int>(entries_.size());
}

void TreeCatalog::collect(int leaves, int min_children, int max_children, std::vector<std::vector<int>>& out) const {
  std::vector<int> current;
  auto rec = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      if (static_cast<int>(current.size()) >= min_children) out.push_back(current);
      return;
    }
    if (max_children > 0 && static_cast<int>(current.size()) >= max_children) return;
    // ids with at most `remaining` leaves form a prefix of entries_
    const int limit = remaining <= max_leaves_ ? first_with_leaves_[static_cast<std::size_t>(remaining + 1)]
                                               : static_cast<int>(entries_.size());
    for (int id = start; id < std::min(limit, static_cast<int>(entries_.size())); ++id) {
      const int used = entries_[static_cast<std::size_t>(id)].leaves;
      // a lone child carrying every leaf only counts when one child suffices
      if (used == leaves && min_children > 1) continue;
      current.push_back(id);
      self(self, id, remaining - used);
      current.pop_back();
    }
  };
  rec(rec, 0, leaves);
}

std::vector<std::vector<int>> TreeCatalog::child_multisets(int leaves, int min_children) const {
  if (leaves > max_leaves_) throw DataError("leaf count exceeds catalog budget");
  std::vector<std::vector<int>> out;
  collect(leaves, min_children, max_children_, out);
  return out;
}

TreeNode TreeCatalog::materialize(int id) const {
  const Entry& e = entry(id);
  TreeNode node{e.label, {}};
  node.children.reserve(e.children.size());
  for (int c : e.children) node.children.push_back(materialize(c));
  return node;
}

std::vector<LabeledRootedTree> enumerate_trees(const TreeFamilySpec& spec, int max_order) {
  if (max_order < 0) throw DataError("negative tree order");
  std::vector<LabeledRootedTree> out;
  if (spec.constant_carrier) out.emplace_back(TreeNode{spec.output, {}}, true);
  const bool output_is_leaf =
      std::find(spec.leaf_labels.begin(), spec.leaf_labels.end(), spec.output) != spec.leaf_labels.end();
  if (output_is_leaf && max_order >= 1) out.emplace_back(TreeNode{spec.output, {}});
  if (max_order >= 1) {
    const TreeCatalog catalog(spec.leaf_labels, spec.internal_labels, max_order, spec.max_children);
    const int min_children = std::max(1, spec.root_min_children);
    for (int n = 1; n <= max_order; ++n) {
      for (const auto& children : catalog.child_multisets(n, min_children)) {
        TreeNode root{spec.output, {}};
        for (int c : children) root.children.push_back(catalog.materialize(c));
        out.emplace_back(std::move(root));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LabeledRootedTree& a, const LabeledRootedTree& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.encoding() < b.encoding();
  });
  return out;
}

std::vector<LabeledRootedTree> trees_with_index(const TreeFamilySpec& spec, const MultiIndex& index) {
  std::vector<LabeledRootedTree> out;
  for (auto& t : enumerate_trees(spec, index.degree())) {
    if (t.leaf_index(index.size()) == index) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace maxent
