#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxent/algebra.hpp"
#include "maxent/moments.hpp"

namespace maxent {

/// Which labeled rooted trees to enumerate.
///
/// Labels are integers 0..label_count-1. The output edge (root to v_out)
/// carries `output`; non-output leaf edges carry a label from
/// `leaf_labels`; every other edge carries one from `internal_labels`.
/// Non-root internal vertices have at least two children (valency >= 3).
struct TreeFamilySpec {
  int label_count = 0;
  std::vector<int> leaf_labels;
  std::vector<int> internal_labels;
  int output = 0;
  /// Children required at the root when it is not itself a leaf.
  int root_min_children = 2;
  /// Emit the 2-vertex tree as the constant-term carrier at order 0.
  bool constant_carrier = true;
  /// Cap on children per vertex (vertex degree - 1); 0 means unbounded.
  int max_children = 0;
};

/// j-moment trees for a problem with k constraints: leaf labels 1..k,
/// internal labels 0..k, labels 0..k+1. Output 0 has no constant carrier;
/// output k+1 relaxes the root to a single child (the composed target trees).
TreeFamilySpec moment_tree_family(int k, int output);
/// j-cumulant trees: leaf and internal labels 1..k, labels 0..k+1 (0 unused).
TreeFamilySpec cumulant_tree_family(int k, int output);

struct TreeNode {
  int label = 0;  // label of the edge towards the parent (or v_out)
  std::vector<TreeNode> children;

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// A rooted tree with a distinguished output leaf v_out, stored as the root
/// node plus its subtrees. Children are kept sorted by (label, encoding), so
/// two trees are isomorphic exactly when their encodings match.
///
/// A root without children is the 2-vertex tree. It is read either as a
/// single leaf (order 1) or, when `constant_carrier` is set, as the order-0
/// term whose only vertex besides v_out is internal.
class LabeledRootedTree {
 public:
  explicit LabeledRootedTree(TreeNode root, bool constant_carrier = false);

  const TreeNode& root() const { return root_; }
  int output() const { return root_.label; }
  bool is_constant_carrier() const { return constant_carrier_; }

  /// Nested labels: a leaf is "3", an internal node "0(1,2)". The constant
  /// carrier is written "[j]".
  const std::string& encoding() const { return encoding_; }
  /// Vertices including v_out.
  int vertex_count() const;
  /// Longest simple path from v_out; the 2-vertex tree has height 1.
  int height() const;
  /// Non-output leaves.
  int order() const;
  /// Non-output leaf counts for labels 1..k, as a k-variable multi-index.
  MultiIndex leaf_index(int k) const;

  friend bool operator==(const LabeledRootedTree& a, const LabeledRootedTree& b) {
    return a.encoding_ == b.encoding_;
  }

 private:
  TreeNode root_;
  bool constant_carrier_;
  std::string encoding_;
};

/// Sorts children recursively and returns the encoding.
std::string canonicalize(TreeNode& node);

/// |Aut| of the tree fixing v_out and preserving labels: the product over
/// vertices of m! for each group of m identical child subtrees.
std::uint64_t aut_size(const LabeledRootedTree& tree);

enum class LeafSign { include, exclude };

struct Amplitude {
  double value = 0.0;
  std::uint64_t aut_size = 1;
  MultiIndex leaf_index;

  double contribution() const { return value / static_cast<double>(aut_size); }
};

/// Product of internal coupling values (-1)^(d+1) * table(labels at v). With
/// LeafSign::include every non-output leaf adds a factor -1, matching the
/// leaf weight -rho; with exclude the bare product is returned.
Amplitude amplitude(const LabeledRootedTree& tree, const CouplingTable& table, int k,
                    LeafSign sign = LeafSign::include);

/// Hash-consed catalog of planted trees: every isomorphism type of
/// (edge label, children multiset) up to a leaf budget, each stored once.
/// Children always precede parents, so ids can be processed in order.
class TreeCatalog {
 public:
  struct Entry {
    int label;
    std::vector<int> children;  // nondecreasing ids
    int leaves;
    int height;
    int vertices;
    std::uint64_t aut;
    /// prod of m! over groups of identical children at this node only.
    std::uint64_t local_symmetry;
  };

  TreeCatalog(std::vector<int> leaf_labels, std::vector<int> internal_labels, int max_leaves, int max_children = 0);

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(int id) const { return entries_[static_cast<std::size_t>(id)]; }
  int max_leaves() const { return max_leaves_; }

  /// Child multisets (sorted id lists) whose leaves sum to `leaves`, with at
  /// least `min_children` members. Independent of the parent label.
  std::vector<std::vector<int>> child_multisets(int leaves, int min_children) const;

  TreeNode materialize(int id) const;

 private:
  void collect(int leaves, int min_children, int max_children, std::vector<std::vector<int>>& out) const;

  std::vector<int> leaf_labels_;
  std::vector<int> internal_labels_;
  int max_leaves_;
  int max_children_;
  std::vector<Entry> entries_;
  std::vector<int> first_with_leaves_;  // entries_ are grouped by leaf count
};

/// One representative per isomorphism type with order <= max_order, sorted
/// by (order, encoding).
std::vector<LabeledRootedTree> enumerate_trees(const TreeFamilySpec& spec, int max_order);

/// Trees of one family bucketed by leaf multi-index over labels 1..k.
std::vector<LabeledRootedTree> trees_with_index(const TreeFamilySpec& spec, const MultiIndex& index);

}  // namespace maxent
