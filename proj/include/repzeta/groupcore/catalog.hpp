#pragma once

#include <functional>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta {

// Permutations on {0..n-1} as image vectors; (a*b)(i) = b(a(i)).
inline Key perm_compose(const Key& a, const Key& b) {
  Key c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

/// Permutation from 1-based cycles.
inline Key perm_from_cycles(unsigned n, const std::vector<std::vector<int>>& cycles) {
  Key p(n);
  for (unsigned i = 0; i < n; ++i) p[i] = i;
  for (const auto& cyc : cycles)
    for (std::size_t i = 0; i < cyc.size(); ++i) p[cyc[i] - 1] = cyc[(i + 1) % cyc.size()] - 1;
  return p;
}

inline FiniteGroup permutation_group(unsigned n, const std::vector<std::vector<std::vector<int>>>& gens, std::string label) {
  std::vector<Key> keys;
  for (const auto& g : gens) keys.push_back(perm_from_cycles(n, g));
  return group_from_closure(keys, perm_compose, std::move(label));
}

inline FiniteGroup cyclic_group(unsigned n) {
  std::vector<int> cyc;
  for (unsigned i = 1; i <= n; ++i) cyc.push_back(static_cast<int>(i));
  if (n == 1) return group_from_closure({Key{0}}, perm_compose, "C1");
  return permutation_group(n, {{cyc}}, "C" + std::to_string(n));
}

inline FiniteGroup dihedral_group(unsigned m) {  // order 2m
  std::vector<int> rot;
  for (unsigned i = 1; i <= m; ++i) rot.push_back(static_cast<int>(i));
  std::vector<std::vector<int>> refl;
  for (unsigned i = 2, j = m; i < j; ++i, --j) refl.push_back({static_cast<int>(i), static_cast<int>(j)});
  return permutation_group(m, {{rot}, refl}, "D" + std::to_string(2 * m));
}

/// Dicyclic group of order 4m: <x, y | x^{2m}, y^2 = x^m, y x y^{-1} = x^{-1}>.
inline FiniteGroup dicyclic_group(unsigned m) {
  i64 n = 2 * m;
  auto op = [n, m](const Key& a, const Key& b) -> Key {
    i64 e = a[1] ? a[0] - b[0] : a[0] + b[0];
    i64 f = a[1] + b[1];
    if (f == 2) {
      e += m;
      f = 0;
    }
    return {normalize_mod(e, n), f};
  };
  return group_from_closure({{1, 0}, {0, 1}}, op, m == 2 ? "Q8" : "Dic" + std::to_string(4 * m));
}

/// Affine maps x -> a x + b over F_p with a in the subgroup generated by g.
inline FiniteGroup affine_group(i64 p, i64 g, std::string label) {
  auto op = [p](const Key& u, const Key& v) -> Key { return {u[0] * v[0] % p, (v[0] * u[1] + v[1]) % p}; };
  return group_from_closure({{g, 0}, {1, 1}}, op, std::move(label));
}

/// Direct product with keys (i, j) of factor indices.
inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string label) {
  auto op = [a, b](const Key& x, const Key& y) -> Key {
    return {static_cast<i64>(a.mul(x[0], y[0])), static_cast<i64>(b.mul(x[1], y[1]))};
  };
  std::vector<Key> gens;
  for (auto g : a.gens()) gens.push_back({static_cast<i64>(g), static_cast<i64>(b.identity())});
  for (auto h : b.gens()) gens.push_back({static_cast<i64>(a.identity()), static_cast<i64>(h)});
  if (gens.empty()) gens.push_back({static_cast<i64>(a.identity()), static_cast<i64>(b.identity())});
  return group_from_closure(gens, op, std::move(label));
}

inline std::vector<Key> sl2_generators() { return {{1, 1, 0, 1}, {1, 0, 1, 1}}; }

inline Key elementary_matrix(unsigned n, unsigned i, unsigned j, i64 v = 1) {
  Key k = identity_matrix(n);
  k[i * n + j] = v;
  return k;
}

inline FiniteGroup unitriangular_group(unsigned n, i64 p) {
  std::vector<Key> gens;
  for (unsigned i = 0; i + 1 < n; ++i) gens.push_back(elementary_matrix(n, i, i + 1));
  return group_from_generators(gens, p, kDefaultGroupCap, "UT" + std::to_string(n) + "(" + std::to_string(p) + ")");
}

struct CatalogEntry {
  std::string name;
  std::size_t order;
  std::function<FiniteGroup()> build;
};

/// Bundled groups of order at most 200.
inline const std::vector<CatalogEntry>& group_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> c;
    c.push_back({"C1", 1, [] { return cyclic_group(1); }});
    for (unsigned n : {2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u})
      c.push_back({"C" + std::to_string(n), n, [n] { return cyclic_group(n); }});
    c.push_back({"V4", 4, [] { return direct_product(cyclic_group(2), cyclic_group(2), "V4"); }});
    c.push_back({"S3", 6, [] { return permutation_group(3, {{{1, 2, 3}}, {{1, 2}}}, "S3"); }});
    c.push_back({"C2^3", 8, [] {
                   return direct_product(direct_product(cyclic_group(2), cyclic_group(2), "V4"), cyclic_group(2), "C2^3");
                 }});
    c.push_back({"C4xC2", 8, [] { return direct_product(cyclic_group(4), cyclic_group(2), "C4xC2"); }});
    c.push_back({"D8", 8, [] { return dihedral_group(4); }});
    c.push_back({"Q8", 8, [] { return dicyclic_group(2); }});
    c.push_back({"C3xC3", 9, [] { return direct_product(cyclic_group(3), cyclic_group(3), "C3xC3"); }});
    c.push_back({"D10", 10, [] { return dihedral_group(5); }});
    c.push_back({"A4", 12, [] { return permutation_group(4, {{{1, 2, 3}}, {{1, 2}, {3, 4}}}, "A4"); }});
    c.push_back({"D12", 12, [] { return dihedral_group(6); }});
    c.push_back({"Dic12", 12, [] { return dicyclic_group(3); }});
    c.push_back({"C2^4", 16, [] {
                   auto v = direct_product(cyclic_group(2), cyclic_group(2), "V4");
                   return direct_product(v, v, "C2^4");
                 }});
    c.push_back({"C4xC4", 16, [] { return direct_product(cyclic_group(4), cyclic_group(4), "C4xC4"); }});
    c.push_back({"D16", 16, [] { return dihedral_group(8); }});
    c.push_back({"Q16", 16, [] { return dicyclic_group(4); }});
    c.push_back({"C2xQ8", 16, [] { return direct_product(cyclic_group(2), dicyclic_group(2), "C2xQ8"); }});
    c.push_back({"C3xS3", 18, [] {
                   return direct_product(cyclic_group(3), permutation_group(3, {{{1, 2, 3}}, {{1, 2}}}, "S3"), "C3xS3");
                 }});
    c.push_back({"F20", 20, [] { return affine_group(5, 2, "F20"); }});
    c.push_back({"F21", 21, [] { return affine_group(7, 2, "F21"); }});
    c.push_back({"S4", 24, [] { return permutation_group(4, {{{1, 2, 3, 4}}, {{1, 2}}}, "S4"); }});
    c.push_back({"SL2(3)", 24, [] { return group_from_generators(sl2_generators(), 3, kDefaultGroupCap, "SL2(3)"); }});
    c.push_back({"C2xA4", 24, [] {
                   return direct_product(cyclic_group(2), permutation_group(4, {{{1, 2, 3}}, {{1, 2}, {3, 4}}}, "A4"),
                                         "C2xA4");
                 }});
    c.push_back({"UT3(3)", 27, [] { return unitriangular_group(3, 3); }});
    c.push_back({"S3xS3", 36, [] {
                   auto s3 = permutation_group(3, {{{1, 2, 3}}, {{1, 2}}}, "S3");
                   return direct_product(s3, s3, "S3xS3");
                 }});
    c.push_back({"GL2(3)", 48, [] {
                   return group_from_generators({{1, 1, 0, 1}, {2, 0, 0, 1}, {1, 0, 1, 1}}, 3, kDefaultGroupCap, "GL2(3)");
                 }});
    c.push_back({"SL2(Z/4)", 48, [] { return group_from_generators(sl2_generators(), 4, kDefaultGroupCap, "SL2(Z/4)"); }});
    c.push_back({"A5", 60, [] { return permutation_group(5, {{{1, 2, 3}}, {{1, 2, 3, 4, 5}}}, "A5"); }});
    c.push_back({"UT4(2)", 64, [] { return unitriangular_group(4, 2); }});
    c.push_back({"C3xSL2(3)", 72, [] {
                   return direct_product(cyclic_group(3), group_from_generators(sl2_generators(), 3), "C3xSL2(3)");
                 }});
    c.push_back({"S5", 120, [] { return permutation_group(5, {{{1, 2, 3, 4, 5}}, {{1, 2}}}, "S5"); }});
    c.push_back({"SL2(5)", 120, [] { return group_from_generators(sl2_generators(), 5, kDefaultGroupCap, "SL2(5)"); }});
    c.push_back({"UT3(5)", 125, [] { return unitriangular_group(3, 5); }});
    c.push_back({"C5^3", 125, [] {
                   return direct_product(direct_product(cyclic_group(5), cyclic_group(5), "C5^2"), cyclic_group(5), "C5^3");
                 }});
    c.push_back({"GL3(2)", 168, [] {
                   return group_from_generators({{1, 1, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 1, 1, 0, 0, 0, 1, 0}}, 2,
                                                kDefaultGroupCap, "GL3(2)");
                 }});
    return c;
  }();
  return entries;
}

inline FiniteGroup catalog_group(const std::string& name) {
  for (const auto& e : group_catalog())
    if (e.name == name) return e.build();
  throw InputError("unknown catalog group '" + name + "'");
}

}  // namespace repzeta
