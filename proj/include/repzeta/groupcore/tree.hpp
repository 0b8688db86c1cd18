#pragma once

#include <map>
#include <memory>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/dirichlet/series.hpp"
#include "repzeta/groupcore/clifford.hpp"

namespace repzeta {

struct TreeNode;

struct TreeChild {
  std::size_t tau = 0;         // index in the table of the node's V
  std::size_t orbit_size = 1;  // |tau^S|
  u64 dim_ratio = 1;           // dim tau / dim rho
  std::shared_ptr<const TreeNode> node;
};

/// Node (H, K, rho) with S = Stab_H(rho) and V = O_p(S). Leaves have V = K; their
/// relative zeta zeta_{S|rho} is computed by brute force.
struct TreeNode {
  Subgroup h, k;
  std::size_t rho = 0;
  Subgroup s, v;
  u64 index = 1;  // [H : S]
  bool leaf = false;
  DirichletPoly leaf_zeta;
  std::vector<TreeChild> children;
};

struct DecompositionTree {
  u64 p = 0;
  std::shared_ptr<const TreeNode> root;

  std::size_t leaf_count() const { return count(*root, true); }
  std::size_t node_count() const { return count(*root, false); }
  std::size_t depth() const { return depth_of(*root); }

private:
  static std::size_t count(const TreeNode& n, bool leaves_only) {
    if (n.leaf) return 1;
    std::size_t c = leaves_only ? 0 : 1;
    for (const auto& ch : n.children) c += count(*ch.node, leaves_only);
    return c;
  }
  static std::size_t depth_of(const TreeNode& n) {
    std::size_t d = 0;
    for (const auto& ch : n.children) d = std::max(d, depth_of(*ch.node));
    return d + 1;
  }
};

namespace detail {

inline std::shared_ptr<const TreeNode> build_tree_node(const Subgroup& h, const Subgroup& k, std::size_t rho, u64 p,
                                                       TableCache& cache) {
  auto node = std::make_shared<TreeNode>();
  node->h = h;
  node->k = k;
  node->rho = rho;
  node->s = stabilizer_of_char(h, k, rho, cache);
  node->v = max_normal_p_subgroup(node->s, p);
  ensure(node->v.contains(k), "O_p of the stabilizer misses K");
  node->index = h.order() / node->s.order();
  if (node->v == k) {
    node->leaf = true;
    node->leaf_zeta = relative_zeta(node->s, k, rho, cache);
    return node;
  }
  auto tk = cache.get(k);
  auto tv = cache.get(node->v);
  const auto& m = *restriction_matrix(node->v, k, cache);
  auto orbit = character_orbits(node->s, node->v, cache);
  std::map<std::size_t, std::size_t> orbit_size;
  for (auto o : orbit) ++orbit_size[o];
  // orbit ids are minimal members, so j == orbit[j] picks the minimal-index representative
  for (std::size_t j = 0; j < tv->size(); ++j) {
    if (!m[j][rho] || orbit[j] != j) continue;
    ensure(tv->degrees[j] % tk->degrees[rho] == 0, "child degree is not a multiple of dim rho");
    TreeChild c;
    c.tau = j;
    c.orbit_size = orbit_size[j];
    c.dim_ratio = tv->degrees[j] / tk->degrees[rho];
    c.node = build_tree_node(node->s, node->v, j, p, cache);
    node->children.push_back(std::move(c));
  }
  return node;
}

inline DirichletPoly fold_tree(const TreeNode& n) {
  if (n.leaf) return n.leaf_zeta.shifted(BigInt(n.index));
  DirichletPoly sum;
  for (const auto& c : n.children) sum = sum + fold_tree(*c.node).shifted(BigInt(c.dim_ratio));
  return sum.shifted(BigInt(n.index));
}

inline void check_node(const TreeNode& n, u64 p) {
  ensure(n.s.contains(n.v) && n.v.contains(n.k) && n.h.contains(n.s), "tree chain K <= V <= S <= H broken");
  if (n.leaf) {
    ensure(n.children.empty(), "leaf with children");
    return;
  }
  ensure(!n.children.empty(), "inner node without children");
  ensure(n.v.order() > n.k.order(), "p-radical did not grow");
  for (const auto& c : n.children) {
    ensure(c.node->h == n.s && c.node->k == n.v && c.node->rho == c.tau, "child does not match its parent");
    check_node(*c.node, p);
  }
}

}  // namespace detail

/// Builds the tree of rho in Irr(K) for K a normal p-subgroup of H.
inline DecompositionTree decomposition_tree(const Subgroup& h, const Subgroup& k, std::size_t rho, u64 p,
                                            TableCache& cache = default_table_cache()) {
  require(is_prime(p), "p must be prime");
  require(is_p_group_order(k.order(), p), "K must be a p-group");
  detail::require_normal(h, k);
  require(rho < cache.get(k)->size(), "character index out of range");
  return DecompositionTree{p, detail::build_tree_node(h, k, rho, p, cache)};
}

/// zeta_{H|rho} folded from the tree: [H:S]^-s sum over S-orbit representatives tau of
/// Irr(V|rho) of (dim tau / dim rho)^-s zeta_{S|tau}.
inline DirichletPoly zeta_via_tree(const DecompositionTree& tree) {
  require(tree.root != nullptr, "empty tree");
  detail::check_node(*tree.root, tree.p);
  return detail::fold_tree(*tree.root);
}

}  // namespace repzeta
