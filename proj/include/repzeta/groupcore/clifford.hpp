#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/dirichlet/series.hpp"
#include "repzeta/groupcore/chartable.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta {

/// Character tables keyed by subgroup element sets (per parent group). Thread-safe.
class TableCache {
public:
  using Matrix = std::vector<std::vector<std::size_t>>;

  explicit TableCache(std::size_t max_entries = 4096) : max_(max_entries) {}

  std::shared_ptr<const CharacterTable> get(const Subgroup& h) {
    Key2 key{h.parent.data_ptr(), h.elems};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = tables_.find(key);
      if (it != tables_.end()) return it->second.second;
    }
    auto t = std::make_shared<const CharacterTable>(character_table(h.group));
    std::lock_guard<std::mutex> lock(mu_);
    if (tables_.size() >= max_) clear_locked();
    tables_.emplace(std::move(key), std::make_pair(h.parent, t));
    return t;
  }

  std::shared_ptr<const Matrix> find_restriction(const Subgroup& h, const Subgroup& k) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = restrictions_.find({h.parent.data_ptr(), h.elems, k.elems});
    return it == restrictions_.end() ? nullptr : it->second.second;
  }

  void store_restriction(const Subgroup& h, const Subgroup& k, std::shared_ptr<const Matrix> m) {
    std::lock_guard<std::mutex> lock(mu_);
    if (restrictions_.size() >= max_) clear_locked();
    restrictions_.emplace(Key3{h.parent.data_ptr(), h.elems, k.elems}, std::make_pair(h.parent, std::move(m)));
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mu_);
    clear_locked();
  }

private:
  using Key2 = std::pair<const void*, std::vector<std::size_t>>;
  using Key3 = std::tuple<const void*, std::vector<std::size_t>, std::vector<std::size_t>>;
  void clear_locked() {
    tables_.clear();
    restrictions_.clear();
  }
  std::size_t max_;
  std::mutex mu_;
  // the stored parent keeps its data alive, so the pointer in a key stays unique
  std::map<Key2, std::pair<FiniteGroup, std::shared_ptr<const CharacterTable>>> tables_;
  std::map<Key3, std::pair<FiniteGroup, std::shared_ptr<const Matrix>>> restrictions_;
};

inline TableCache& default_table_cache() {
  static TableCache cache;
  return cache;
}

inline DirichletPoly zeta_of_table(const CharacterTable& t) {
  DirichletPoly z;
  for (auto d : t.degrees) z.add(BigInt(d), 1);
  return z;
}

/// Representation zeta function: terms[n] = number of irreducibles of degree n.
inline DirichletPoly zeta_of_group(const FiniteGroup& g) { return zeta_of_table(character_table(g)); }

namespace detail {

// class of K containing the parent element x
inline std::size_t class_in(const Subgroup& k, const CharacterTable& tk, std::size_t x) {
  auto i = k.from_parent(x);
  ensure(i.has_value(), "element outside the subgroup");
  return tk.classes->class_of[*i];
}

inline std::vector<std::uint32_t> value_key(const CharacterTable& t, std::size_t i, const std::vector<std::size_t>& perm) {
  std::vector<std::uint32_t> key;
  for (auto c : perm) {
    const auto& v = t.values[i][c];
    key.push_back(static_cast<std::uint32_t>(v.size()));
    for (const auto& term : v) {
      key.push_back(term.exp);
      key.push_back(term.mult);
    }
  }
  return key;
}

inline void require_normal(const Subgroup& h, const Subgroup& k) {
  require(h.parent.same_as(k.parent), "subgroups of different groups");
  require(h.contains(k), "normal subgroup is not contained in the ambient group");
  require(is_normal_in(k, h), "subgroup is not normal");
}

}  // namespace detail

/// m[i][j] = <Res chi_i, tau_j>_K for chi_i in Irr(H), tau_j in Irr(K); K inside H, same parent.
inline std::shared_ptr<const TableCache::Matrix> restriction_matrix(const Subgroup& h, const Subgroup& k,
                                                                   TableCache& cache = default_table_cache()) {
  require(h.parent.same_as(k.parent) && h.contains(k), "restriction needs a subgroup");
  if (auto hit = cache.find_restriction(h, k)) return hit;
  auto th = cache.get(h);
  auto tk = cache.get(k);
  auto m = std::make_shared<TableCache::Matrix>(th->size(), std::vector<std::size_t>(tk->size()));
  if (h == k) {
    for (std::size_t i = 0; i < th->size(); ++i) (*m)[i][i] = 1;
  } else {
    std::vector<std::size_t> cls;
    for (auto r : tk->classes->reps) cls.push_back(detail::class_in(h, *th, k.to_parent(r)));
    for (std::size_t i = 0; i < th->size(); ++i) {
      std::vector<SparseCyc> res;
      res.reserve(cls.size());
      for (auto c : cls) res.push_back(th->values[i][c]);
      for (std::size_t j = 0; j < tk->size(); ++j) {
        Rational ip = class_inner_product(tk->classes->sizes, k.order(), res, th->exponent, tk->values[j], tk->exponent);
        ensure(is_integer(ip) && ip >= 0, "restriction multiplicity is not a natural number");
        (*m)[i][j] = static_cast<std::size_t>(to_int64(numerator(ip)));
      }
    }
  }
  cache.store_restriction(h, k, m);
  return m;
}

/// Irr(H | tau): indices into H's table of the irreducibles whose restriction contains tau.
inline std::vector<std::size_t> irr_over(const Subgroup& h, const Subgroup& k, std::size_t tau,
                                         TableCache& cache = default_table_cache()) {
  detail::require_normal(h, k);
  require(tau < cache.get(k)->size(), "character index out of range");
  const auto& m = *restriction_matrix(h, k, cache);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i][tau] > 0) out.push_back(i);
  return out;
}

inline DirichletPoly relative_zeta(const Subgroup& h, const Subgroup& k, std::size_t tau,
                                   TableCache& cache = default_table_cache()) {
  auto over = irr_over(h, k, tau, cache);
  auto th = cache.get(h);
  u64 dt = cache.get(k)->degrees[tau];
  DirichletPoly z;
  for (auto i : over) {
    ensure(th->degrees[i] % dt == 0, "degree over tau is not a multiple of dim tau");
    z.add(BigInt(th->degrees[i] / dt), 1);
  }
  return z;
}

/// Permutation of Irr(K) induced by x in the normalizer: tau -> tau^x, tau^x(k) = tau(x k x^-1).
inline std::vector<std::size_t> character_permutation(const Subgroup& k, const CharacterTable& tk, std::size_t x) {
  const auto& g = k.parent;
  std::size_t xi = g.inv(x);
  std::vector<std::size_t> perm(tk.classes->count());
  for (std::size_t c = 0; c < perm.size(); ++c) {
    std::size_t r = k.to_parent(tk.classes->reps[c]);
    perm[c] = detail::class_in(k, tk, g.mul(g.mul(x, r), xi));
  }
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  std::vector<std::size_t> ident(perm.size());
  for (std::size_t c = 0; c < ident.size(); ++c) ident[c] = c;
  for (std::size_t j = 0; j < tk.size(); ++j) index.emplace(detail::value_key(tk, j, ident), j);
  std::vector<std::size_t> out(tk.size());
  for (std::size_t j = 0; j < tk.size(); ++j) {
    auto it = index.find(detail::value_key(tk, j, perm));
    ensure(it != index.end(), "conjugate character missing from the table");
    out[j] = it->second;
  }
  return out;
}

/// Orbit id of each tau in Irr(K) under conjugation by H; ids are the minimal member of the orbit.
inline std::vector<std::size_t> character_orbits(const Subgroup& h, const Subgroup& k,
                                                 TableCache& cache = default_table_cache()) {
  detail::require_normal(h, k);
  auto tk = cache.get(k);
  std::vector<std::vector<std::size_t>> perms;
  for (auto gi : h.group.gens()) perms.push_back(character_permutation(k, *tk, h.to_parent(gi)));
  std::vector<std::size_t> orbit(tk->size(), SIZE_MAX);
  for (std::size_t j = 0; j < tk->size(); ++j) {
    if (orbit[j] != SIZE_MAX) continue;
    std::vector<std::size_t> queue{j};
    orbit[j] = j;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (const auto& p : perms)
        if (orbit[p[queue[q]]] == SIZE_MAX) {
          orbit[p[queue[q]]] = j;
          queue.push_back(p[queue[q]]);
        }
  }
  return orbit;
}

/// Stab_H(tau) = {h : tau(h^-1 k h) = tau(k) for all k}, as a subgroup of the common parent.
inline Subgroup stabilizer_of_char(const Subgroup& h, const Subgroup& k, std::size_t tau,
                                   TableCache& cache = default_table_cache()) {
  detail::require_normal(h, k);
  auto tk = cache.get(k);
  require(tau < tk->size(), "character index out of range");
  const auto& g = h.parent;
  std::size_t nc = tk->classes->count();
  std::vector<std::size_t> keep;
  for (auto x : h.elems) {
    if (k.contains(x)) {
      keep.push_back(x);
      continue;
    }
    std::size_t xi = g.inv(x);
    bool fixed = true;
    for (std::size_t c = 0; c < nc && fixed; ++c) {
      std::size_t r = k.to_parent(tk->classes->reps[c]);
      std::size_t d = detail::class_in(k, *tk, g.mul(g.mul(xi, r), x));
      if (d != c && tk->values[tau][d] != tk->values[tau][c]) fixed = false;
    }
    if (fixed) keep.push_back(x);
  }
  return make_subgroup(g, std::move(keep));
}

/// All normal subgroups of H (as subgroups of H's parent), sorted by order then elements.
inline std::vector<Subgroup> normal_subgroups(const Subgroup& h) {
  const auto& g = h.parent;
  auto cc = conjugacy_classes(h.group);
  // normal closures of single classes
  std::set<std::vector<std::size_t>> seen;
  std::vector<Subgroup> closures;
  for (std::size_t c = 1; c < cc->count(); ++c) {
    std::vector<std::size_t> gens;
    for (std::size_t x = 0; x < h.order(); ++x)
      if (cc->class_of[x] == c) gens.push_back(h.to_parent(x));
    auto n = generated_subgroup(g, gens);
    if (seen.insert(n.elems).second) closures.push_back(std::move(n));
  }
  std::vector<Subgroup> all{trivial_subgroup(g)};
  std::set<std::vector<std::size_t>> have{all[0].elems};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const auto& m : closures) {
      if (all[i].contains(m)) continue;
      auto j = join(all[i], m);
      if (have.insert(j.elems).second) all.push_back(std::move(j));
    }
  std::sort(all.begin(), all.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elems < b.elems;
  });
  return all;
}

inline bool is_p_group_order(std::size_t n, u64 p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

/// O_p(H): the core of a Sylow p-subgroup, i.e. the intersection of all Sylow p-subgroups.
inline Subgroup max_normal_p_subgroup(const Subgroup& h, u64 p) {
  require(is_prime(p), "p must be prime");
  const auto& g = h.parent;
  if (is_p_group_order(h.order(), p)) return h;
  std::size_t ppart = 1;
  for (std::size_t n = h.order(); n % p == 0; n /= p) ppart *= p;
  if (ppart == 1) return trivial_subgroup(g);
  // grow a Sylow subgroup: pick x in N_H(P) \ P with x^p in P
  Subgroup syl = trivial_subgroup(g);
  while (syl.order() < ppart) {
    auto norm = normalizer(h, syl);
    std::optional<std::size_t> pick;
    for (auto x : norm.elems)
      if (!syl.contains(x) && syl.contains(g.pow(x, p))) {
        pick = x;
        break;
      }
    ensure(pick.has_value(), "Sylow growth stalled");
    std::vector<std::size_t> gens;
    for (auto y : syl.group.gens()) gens.push_back(syl.to_parent(y));
    gens.push_back(*pick);
    syl = generated_subgroup(g, gens);
  }
  // core: largest subset of P closed under conjugation by the generators of H
  std::vector<std::size_t> core = syl.elems;
  std::vector<std::size_t> hg;
  for (auto y : h.group.gens()) {
    hg.push_back(h.to_parent(y));
    hg.push_back(g.inv(h.to_parent(y)));
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::size_t> next;
    for (auto x : core) {
      bool ok = true;
      for (auto y : hg)
        if (!std::binary_search(core.begin(), core.end(), g.conj(x, y))) {
          ok = false;
          break;
        }
      if (ok) next.push_back(x);
    }
    if (next.size() != core.size()) {
      changed = true;
      core = std::move(next);
    }
  }
  auto out = make_subgroup(g, std::move(core));
  ensure(is_normal_in(out, h) && is_p_group_order(out.order(), p), "O_p is not a normal p-subgroup");
  return out;
}

struct CliffordReport {
  bool ok = true;
  std::optional<std::size_t> witness;  // tau whose contribution could not be matched
  DirichletPoly lhs, rhs;
  explicit operator bool() const { return ok; }
};

/// zeta_H(s) = sum_{tau in Irr K} [H:Stab tau]^-1 (dim tau)^-s zeta_{H|tau}(s), exactly.
inline CliffordReport verify_clifford_sum(const Subgroup& h, const Subgroup& k, TableCache& cache = default_table_cache()) {
  detail::require_normal(h, k);
  auto th = cache.get(h);
  auto tk = cache.get(k);
  const auto& m = *restriction_matrix(h, k, cache);
  auto orbit = character_orbits(h, k, cache);
  std::map<std::size_t, std::size_t> orbit_size;
  for (auto o : orbit) ++orbit_size[o];

  CliffordReport rep;
  rep.lhs = zeta_of_table(*th);
  for (std::size_t j = 0; j < tk->size(); ++j) {
    u64 dt = tk->degrees[j];
    DirichletPoly rel;
    for (std::size_t i = 0; i < th->size(); ++i) {
      if (!m[i][j]) continue;
      if (th->degrees[i] % dt != 0) {
        rep.ok = false;
        rep.witness = j;
        return rep;
      }
      rel.add(BigInt(th->degrees[i] / dt), 1);
    }
    Rational w(1, static_cast<i64>(orbit_size[orbit[j]]));
    rep.rhs = rep.rhs + rel.shifted(BigInt(dt)).scaled(w);
  }
  rep.ok = rep.lhs == rep.rhs;
  if (!rep.ok) {
    // name the first tau whose orbit sum disagrees with the constituents lying over it
    for (std::size_t j = 0; j < tk->size() && !rep.witness; ++j) {
      DirichletPoly over;
      for (std::size_t i = 0; i < th->size(); ++i)
        if (m[i][j]) over.add(BigInt(th->degrees[i]), 1);
      if (over.empty()) rep.witness = j;
    }
    if (!rep.witness) rep.witness = 0;
  }
  return rep;
}

struct IndexBoundsReport {
  bool ok = true;
  std::string failure;
  explicit operator bool() const { return ok; }
};

/// The counting and zeta sandwiches between zeta_{H|tau} and zeta_{L|tau} for K in H in L, K normal in L.
inline IndexBoundsReport verify_index_bounds(const Subgroup& l, const Subgroup& h, const Subgroup& k, std::size_t tau,
                                             TableCache& cache = default_table_cache()) {
  detail::require_normal(l, k);
  require(l.contains(h) && h.contains(k), "need K inside H inside L");
  auto zl = relative_zeta(l, k, tau, cache);
  auto zh = relative_zeta(h, k, tau, cache);
  i64 idx = static_cast<i64>(l.order() / h.order());
  IndexBoundsReport rep;
  auto partial = [](const DirichletPoly& z, const BigInt& n) {
    Rational t = 0;
    for (const auto& [d, c] : z.terms())
      if (d <= n) t += c;
    return t;
  };
  BigInt top = std::max(zl.max_dimension(), zh.max_dimension());
  for (BigInt n = 1; n <= top; ++n) {
    Rational mid = partial(zl, n);
    Rational low = partial(zh, n / idx) / idx;
    Rational high = partial(zh, n) * idx;
    if (!(low <= mid && mid <= high)) {
      rep.ok = false;
      rep.failure = "count inequality fails at N = " + n.str();
      return rep;
    }
  }
  for (long long s : {0LL, 1LL, 2LL}) {
    Rational vl = zl.eval_exact(s), vh = zh.eval_exact(s);
    Rational low = vh * rational_pow(Rational(idx), -1 - s);
    Rational high = vh * idx;
    if (!(low <= vl && vl <= high)) {
      rep.ok = false;
      rep.failure = "zeta inequality fails at s = " + std::to_string(s);
      return rep;
    }
  }
  return rep;
}

struct ExtendibilityReport {
  bool extendible = false;
  bool count_match = false;
};

/// Decides extendibility of an S-fixed rho in Irr(V) by exhaustive restriction, and compares
/// the degrees of Irr(S|rho) / dim rho with the degrees of Irr(S/V).
inline ExtendibilityReport extendibility_check(const Subgroup& s, const Subgroup& v, std::size_t rho,
                                               TableCache& cache = default_table_cache()) {
  detail::require_normal(s, v);
  require(stabilizer_of_char(s, v, rho, cache) == s, "character is not fixed by S");
  auto ts = cache.get(s);
  auto tv = cache.get(v);
  const auto& m = *restriction_matrix(s, v, cache);
  u64 dr = tv->degrees[rho];
  ExtendibilityReport rep;
  std::vector<u64> over, quot;
  for (std::size_t i = 0; i < ts->size(); ++i) {
    if (!m[i][rho]) continue;
    if (ts->degrees[i] == dr && m[i][rho] == 1) rep.extendible = true;
    over.push_back(ts->degrees[i] / dr);
  }
  // Irr(S/V): the characters of S with V in the kernel, i.e. lying over the trivial character of V
  for (std::size_t i = 0; i < ts->size(); ++i)
    if (m[i][tv->trivial()] && ts->degrees[i] == m[i][tv->trivial()]) quot.push_back(ts->degrees[i]);
  std::sort(over.begin(), over.end());
  std::sort(quot.begin(), quot.end());
  rep.count_match = over == quot;
  return rep;
}

/// Subgroups of L that contain K and have index at most max_index in L, found by adding one
/// element at a time starting from K.
inline std::vector<Subgroup> overgroups_of_small_index(const Subgroup& l, const Subgroup& k, std::size_t max_index) {
  require(l.contains(k), "K must lie in L");
  const auto& g = l.parent;
  std::set<std::vector<std::size_t>> seen{k.elems};
  std::vector<Subgroup> frontier{k}, out;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Subgroup cur = frontier[i];
    if (l.order() / cur.order() <= max_index) out.push_back(cur);
    std::vector<std::size_t> base;
    for (auto y : cur.group.gens()) base.push_back(cur.to_parent(y));
    std::vector<bool> covered(g.order(), false);
    for (auto x : l.elems) {
      if (cur.contains(x) || covered[x]) continue;
      auto gens = base;
      gens.push_back(x);
      auto next = generated_subgroup(g, gens);
      // other generators of <x> give the same join
      std::size_t o = g.element_order(x);
      for (std::size_t j = 1, y = x; j < o; ++j, y = g.mul(y, x))
        if (std::gcd(j, o) == 1) covered[y] = true;
      if (seen.insert(next.elems).second) frontier.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elems < b.elems;
  });
  return out;
}

}  // namespace repzeta
