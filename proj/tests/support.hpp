#pragma once

// Shared fixtures and brute-force references for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "maxent/problem.hpp"
#include "maxent/trees.hpp"

namespace testing {

using maxent::Problem;
using maxent::TreeNode;

inline Problem rademacher(bool with_target = true) {
  Problem p;
  p.alphabet = {"a", "b"};
  p.q = {0.5, 0.5};
  p.r = {{1.0, -1.0}};
  if (with_target) p.s = std::vector<double>{1.0, 0.0};
  return p;
}

/// q bounded away from zero so that small spheres of rho stay feasible.
inline Problem random_problem(std::mt19937_64& rng, int n, int k, bool with_target = true) {
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Problem p;
  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    p.alphabet.push_back("s" + std::to_string(s));
    p.q.push_back(weight(rng));
    total += p.q.back();
  }
  for (double& q : p.q) q /= total;
  p.r.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : p.r)
    for (double& v : row) v = value(rng);
  if (with_target) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (double& v : s) v = value(rng);
    p.s = s;
  }
  return p;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// ---- explicit graph form of a rooted tree ---------------------------------
// Vertex 0 is v_out; vertex 1 is the root. parent[v] < v for v >= 1 and
// label[v] is the label of the edge from v to its parent.
struct ParentArray {
  std::vector<int> parent;
  std::vector<int> label;

  int size() const { return static_cast<int>(parent.size()); }
  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> c(parent.size());
    for (int v = 1; v < size(); ++v) c[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);
    return c;
  }
};

inline ParentArray to_parent_array(const TreeNode& root) {
  ParentArray g{{-1}, {-1}};
  std::function<void(const TreeNode&, int)> add = [&](const TreeNode& node, int parent) {
    const int id = g.size();
    g.parent.push_back(parent);
    g.label.push_back(node.label);
    for (const auto& c : node.children) add(c, id);
  };
  add(root, 0);
  return g;
}

inline TreeNode to_node(const ParentArray& g, int v = 1) {
  TreeNode node{g.label[static_cast<std::size_t>(v)], {}};
  const auto kids = g.children();
  for (int c : kids[static_cast<std::size_t>(v)]) node.children.push_back(to_node(g, c));
  return node;
}

/// Counts vertex bijections fixing v_out that preserve adjacency and edge
/// labels, by exhaustive search over assignments (pruned only by adjacency
/// consistency with the vertices already placed).
inline std::uint64_t brute_force_aut(const TreeNode& root) {
  const ParentArray g = to_parent_array(root);
  const int n = g.size();
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::vector<std::vector<int>> edge_label(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int v = 1; v < n; ++v) {
    const auto p = static_cast<std::size_t>(g.parent[static_cast<std::size_t>(v)]);
    const auto u = static_cast<std::size_t>(v);
    adj[p][u] = adj[u][p] = true;
    edge_label[p][u] = edge_label[u][p] = g.label[u];
  }
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  image[0] = 0;
  used[0] = true;
  std::uint64_t count = 0;
  std::function<void(int)> place = [&](int v) {
    if (v == n) {
      ++count;
      return;
    }
    for (int w = 1; w < n; ++w) {
      if (used[static_cast<std::size_t>(w)]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        const int iu = image[static_cast<std::size_t>(u)];
        ok = adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] == adj[static_cast<std::size_t>(iu)][static_cast<std::size_t>(w)] &&
             edge_label[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] == edge_label[static_cast<std::size_t>(iu)][static_cast<std::size_t>(w)];
      }
      if (!ok) continue;
      image[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = true;
      place(v + 1);
      used[static_cast<std::size_t>(w)] = false;
    }
  };
  place(1);
  return count;
}

/// Order-sensitive encoding (children kept in the given order).
inline std::string planar_encoding(const TreeNode& node) {
  std::string out = std::to_string(node.label);
  if (node.children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < node.children.size(); ++i) out += (i ? "," : "") + planar_encoding(node.children[i]);
  return out + ")";
}

/// Distinct planar (ordered) trees obtained by reordering children everywhere.
inline std::set<std::string> planar_arrangements(const TreeNode& node) {
  if (node.children.empty()) return {std::to_string(node.label)};
  std::vector<std::set<std::string>> child_sets;
  for (const auto& c : node.children) child_sets.push_back(planar_arrangements(c));
  std::vector<std::size_t> order(node.children.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::set<std::string> out;
  do {
    std::vector<std::string> current;
    std::function<void(std::size_t)> pick = [&](std::size_t pos) {
      if (pos == order.size()) {
        std::string s = std::to_string(node.label) + "(";
        for (std::size_t i = 0; i < current.size(); ++i) s += (i ? "," : "") + current[i];
        out.insert(s + ")");
        return;
      }
      for (const auto& enc : child_sets[order[pos]]) {
        current.push_back(enc);
        pick(pos + 1);
        current.pop_back();
      }
    };
    pick(0);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

/// prod over vertices of (deg v - 1)!, i.e. (number of children)!.
inline double children_factorial_product(const TreeNode& node) {
  double prod = factorial(static_cast<int>(node.children.size()));
  for (const auto& c : node.children) prod *= children_factorial_product(c);
  return prod;
}

/// Canonical encodings of every tree of the family with exactly `leaves`
/// non-output leaves, found by generating all parent arrays (parent[v] < v)
/// with all admissible labelings and deduplicating canonical forms.
inline std::set<std::string> brute_force_family(const maxent::TreeFamilySpec& spec, int leaves) {
  std::set<std::string> found;
  const int max_nodes = 2 * leaves - 1 + (spec.root_min_children < 2 ? 1 : 0);
  for (int nodes = 1; nodes <= max_nodes; ++nodes) {
    ParentArray g;
    g.parent.assign(static_cast<std::size_t>(nodes + 1), -1);
    g.label.assign(static_cast<std::size_t>(nodes + 1), -1);
    g.parent[1] = 0;
    g.label[1] = spec.output;
    std::function<void(int)> parents = [&](int v) {
      if (v <= nodes) {
        for (int p = 1; p < v; ++p) {
          g.parent[static_cast<std::size_t>(v)] = p;
          parents(v + 1);
        }
        return;
      }
      const auto kids = g.children();
      int leaf_count = 0;
      for (int u = 1; u <= nodes; ++u) {
        const auto c = kids[static_cast<std::size_t>(u)].size();
        if (c == 0) ++leaf_count;
        const std::size_t need = u == 1 ? static_cast<std::size_t>(spec.root_min_children) : 2;
        if (c > 0 && c < need) return;
        if (spec.max_children > 0 && c > static_cast<std::size_t>(spec.max_children)) return;
      }
      if (nodes == 1) return;  // the 2-vertex tree is handled by the caller
      if (leaf_count != leaves) return;
      std::function<void(int)> labels = [&](int v2) {
        if (v2 > nodes) {
          TreeNode root = to_node(g);
          found.insert(maxent::canonicalize(root));
          return;
        }
        const bool leaf = kids[static_cast<std::size_t>(v2)].empty();
        for (int l : leaf ? spec.leaf_labels : spec.internal_labels) {
          g.label[static_cast<std::size_t>(v2)] = l;
          labels(v2 + 1);
        }
      };
      labels(2);
    };
    parents(2);
  }
  return found;
}

}  // namespace testing
