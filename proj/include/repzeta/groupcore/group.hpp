#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"

namespace repzeta {

using Key = std::vector<i64>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (i64 v : k) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline constexpr std::size_t kTableLimit = 2048;
inline constexpr std::size_t kDefaultGroupCap = 200000;

/// Finite group on indices 0..order-1. Element descriptors (keys) are kept in lexicographic
/// order, so indexing is canonical. Products come from a stored table when the order is at
/// most kTableLimit, otherwise from a product functor.
class FiniteGroup {
public:
  struct Data {
    std::string label;
    std::vector<Key> keys;
    std::vector<std::uint32_t> table;
    std::function<std::size_t(std::size_t, std::size_t)> mul_fn;
    std::function<std::optional<std::size_t>(const Key&)> lookup;
    std::vector<std::size_t> inv;
    std::size_t identity = 0;
    std::vector<std::size_t> gens;
    i64 modulus = 0;       // matrix groups: entries live in Z/modulus
    unsigned matrix_dim = 0;
  };

  FiniteGroup() = default;
  explicit FiniteGroup(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  std::size_t order() const { return d_->keys.size(); }
  std::size_t identity() const { return d_->identity; }
  std::size_t inv(std::size_t a) const { return d_->inv[a]; }
  const std::vector<std::size_t>& gens() const { return d_->gens; }
  const Key& key(std::size_t a) const { return d_->keys[a]; }
  const std::vector<Key>& keys() const { return d_->keys; }
  const std::string& label() const { return d_->label; }
  bool has_table() const { return !d_->table.empty(); }
  i64 modulus() const { return d_->modulus; }
  unsigned matrix_dim() const { return d_->matrix_dim; }
  const Data& data() const { return *d_; }
  bool same_as(const FiniteGroup& o) const { return d_ == o.d_; }
  const void* data_ptr() const { return d_.get(); }

  std::size_t mul(std::size_t a, std::size_t b) const {
    if (!d_->table.empty()) return d_->table[a * order() + b];
    return d_->mul_fn(a, b);
  }

  /// g^{-1} x g
  std::size_t conj(std::size_t x, std::size_t g) const { return mul(mul(inv(g), x), g); }

  std::size_t pow(std::size_t a, std::size_t e) const {
    std::size_t r = identity();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::size_t element_order(std::size_t a) const {
    std::size_t o = 1, x = a;
    while (x != identity()) {
      x = mul(x, a);
      ++o;
    }
    return o;
  }

  std::optional<std::size_t> index_of(const Key& k) const {
    if (d_->lookup) return d_->lookup(k);
    auto it = std::lower_bound(d_->keys.begin(), d_->keys.end(), k);
    if (it == d_->keys.end() || *it != k) return std::nullopt;
    return static_cast<std::size_t>(it - d_->keys.begin());
  }

  bool is_abelian() const {
    for (auto a : gens())
      for (auto b : gens())
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

private:
  std::shared_ptr<const Data> d_;
};

namespace detail {

inline void fill_table(FiniteGroup::Data& d) {
  std::size_t n = d.keys.size();
  if (n > kTableLimit) return;
  d.table.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d.table[a * n + b] = static_cast<std::uint32_t>(d.mul_fn(a, b));
}

/// Completes identity, inverses and (if missing) a generating set, given keys + mul_fn.
inline void finish(FiniteGroup::Data& d) {
  std::size_t n = d.keys.size();
  fill_table(d);
  auto mul = [&](std::size_t a, std::size_t b) -> std::size_t {
    return d.table.empty() ? d.mul_fn(a, b) : d.table[a * n + b];
  };
  d.identity = n;
  for (std::size_t x = 0; x < n; ++x)
    if (mul(x, x) == x) {
      d.identity = x;
      break;
    }
  ensure(d.identity < n, "no identity element");
  d.inv.assign(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (d.inv[x] != n) continue;
    // x^{o-1} is the inverse
    std::size_t prev = d.identity, cur = x;
    while (cur != d.identity) {
      prev = cur;
      cur = mul(cur, x);
    }
    d.inv[x] = prev;
    d.inv[prev] = x;
  }
  std::vector<std::size_t> gens;
  for (auto g : d.gens)
    if (g != d.identity && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  d.gens = gens;
}

}  // namespace detail

/// Closure of gens under mul in the subgroup lattice of an ambient group, as sorted indices.
template <class Mul>
std::vector<std::size_t> closure_indices(const std::vector<std::size_t>& gens, std::size_t identity, std::size_t ambient,
                                         Mul&& mul) {
  std::vector<char> seen(ambient, 0);
  std::vector<std::size_t> elems{identity};
  seen[identity] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (auto g : gens) {
      std::size_t y = mul(elems[i], g);
      if (!seen[y]) {
        seen[y] = 1;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

/// Breadth-first closure of key generators under op; canonical lexicographic indexing.
inline FiniteGroup group_from_closure(const std::vector<Key>& gen_keys, std::function<Key(const Key&, const Key&)> op,
                                      std::string label, std::size_t cap = kDefaultGroupCap, i64 modulus = 0,
                                      unsigned matrix_dim = 0) {
  require(!gen_keys.empty(), "at least one generator is required");
  std::unordered_set<Key, KeyHash> seen(gen_keys.begin(), gen_keys.end());
  std::vector<Key> elems(seen.begin(), seen.end());
  std::sort(elems.begin(), elems.end());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gen_keys) {
      Key y = op(elems[i], g);
      if (seen.insert(y).second) {
        elems.push_back(std::move(y));
        if (elems.size() > cap) throw SizeError("group closure exceeds cap of " + std::to_string(cap) + " elements");
      }
    }
  }
  auto d = std::make_shared<FiniteGroup::Data>();
  d->label = std::move(label);
  d->modulus = modulus;
  d->matrix_dim = matrix_dim;
  std::sort(elems.begin(), elems.end());
  d->keys = std::move(elems);
  auto index = std::make_shared<std::unordered_map<Key, std::size_t, KeyHash>>();
  index->reserve(d->keys.size());
  for (std::size_t i = 0; i < d->keys.size(); ++i) index->emplace(d->keys[i], i);
  auto* raw = d.get();
  d->lookup = [index](const Key& k) -> std::optional<std::size_t> {
    auto it = index->find(k);
    if (it == index->end()) return std::nullopt;
    return it->second;
  };
  d->mul_fn = [raw, op, index](std::size_t a, std::size_t b) { return index->at(op(raw->keys[a], raw->keys[b])); };
  for (const auto& g : gen_keys) d->gens.push_back(index->at(g));
  detail::finish(*d);
  return FiniteGroup(std::move(d));
}

/// Group given by an explicit Cayley table (rows = left factor).
inline FiniteGroup group_from_table(const std::vector<std::vector<std::size_t>>& table, std::string label = "table") {
  std::size_t n = table.size();
  require(n >= 1, "empty multiplication table");
  for (const auto& row : table) {
    require(row.size() == n, "multiplication table must be square");
    std::vector<char> hit(n, 0);
    for (auto v : row) {
      require(v < n, "table entry out of range");
      require(!hit[v], "table row is not a permutation");
      hit[v] = 1;
    }
  }
  auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) { return table[table[a][b]][c] == table[a][table[b][c]]; };
  if (n <= 512) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) require(assoc(a, b, c), "table is not associative");
  } else {
    std::uint64_t state = 12345;
    for (int t = 0; t < 200000; ++t) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      std::size_t a = (state >> 11) % n, b = (state >> 23) % n, c = (state >> 37) % n;
      require(assoc(a, b, c), "table is not associative");
    }
  }
  auto d = std::make_shared<FiniteGroup::Data>();
  d->label = std::move(label);
  for (std::size_t i = 0; i < n; ++i) d->keys.push_back({static_cast<i64>(i)});
  auto tab = std::make_shared<std::vector<std::vector<std::size_t>>>(table);
  d->mul_fn = [tab](std::size_t a, std::size_t b) { return (*tab)[a][b]; };
  for (std::size_t i = 0; i < n; ++i) d->gens.push_back(i);
  detail::finish(*d);
  // every element is a generator at this point; thin to a generating set
  std::vector<std::size_t> gens;
  std::vector<std::size_t> cur{d->identity};
  auto mul = [&](std::size_t a, std::size_t b) { return table[a][b]; };
  for (std::size_t x = 0; x < n && cur.size() < n; ++x) {
    if (std::binary_search(cur.begin(), cur.end(), x)) continue;
    gens.push_back(x);
    cur = closure_indices(gens, d->identity, n, mul);
  }
  d->gens = gens;
  return FiniteGroup(std::move(d));
}

// ---------------------------------------------------------------------------
// Matrices over Z/m as keys

inline Key matmul_mod(const Key& a, const Key& b, unsigned n, i64 m) {
  Key c(n * n, 0);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned k = 0; k < n; ++k) {
      i64 aik = a[i * n + k];
      if (!aik) continue;
      for (unsigned j = 0; j < n; ++j) c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % m;
    }
  return c;
}

inline i64 det_mod(Key a, unsigned n, i64 m) {
  // cofactor expansion is fine for the small sizes used here
  if (n == 1) return normalize_mod(a[0], m);
  i64 det = 0;
  for (unsigned c = 0; c < n; ++c) {
    Key minor;
    for (unsigned i = 1; i < n; ++i)
      for (unsigned j = 0; j < n; ++j)
        if (j != c) minor.push_back(a[i * n + j]);
    i64 sub = det_mod(minor, n - 1, m);
    i64 term = normalize_mod(a[c] % m * sub, m);
    det = normalize_mod(det + ((c % 2) ? -term : term), m);
  }
  return det;
}

/// Subgroup of GL_n(Z/m) generated by row-major matrices.
inline FiniteGroup group_from_generators(const std::vector<Key>& gens, i64 m, std::size_t cap = kDefaultGroupCap,
                                         std::string label = "matrix group") {
  require(m >= 2, "modulus must be at least 2");
  require(!gens.empty(), "at least one generator is required");
  std::size_t sz = gens[0].size();
  unsigned n = 0;
  while (n * n < sz) ++n;
  require(n * n == sz && n >= 1, "generators must be square row-major matrices");
  std::vector<Key> reduced;
  for (const auto& g : gens) {
    require(g.size() == sz, "generators must share one size");
    Key r(sz);
    for (std::size_t i = 0; i < sz; ++i) r[i] = normalize_mod(g[i], m);
    require(std::gcd(det_mod(r, n, m), m) == 1, "generator is not invertible modulo " + std::to_string(m));
    reduced.push_back(std::move(r));
  }
  auto op = [n, m](const Key& a, const Key& b) { return matmul_mod(a, b, n, m); };
  return group_from_closure(reduced, op, std::move(label), cap, m, n);
}

inline Key identity_matrix(unsigned n) {
  Key k(n * n, 0);
  for (unsigned i = 0; i < n; ++i) k[i * n + i] = 1;
  return k;
}

// ---------------------------------------------------------------------------
// Subgroups

/// A subgroup of `parent`; element i of `group` is parent element elems[i].
struct Subgroup {
  FiniteGroup parent;
  std::vector<std::size_t> elems;
  FiniteGroup group;

  std::size_t order() const { return elems.size(); }
  std::size_t to_parent(std::size_t i) const { return elems[i]; }
  std::optional<std::size_t> from_parent(std::size_t x) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), x);
    if (it == elems.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - elems.begin());
  }
  bool contains(std::size_t x) const { return std::binary_search(elems.begin(), elems.end(), x); }
  bool contains(const Subgroup& other) const {
    return std::includes(elems.begin(), elems.end(), other.elems.begin(), other.elems.end());
  }
  bool is_whole() const { return elems.size() == parent.order(); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elems == b.elems; }
};

/// Builds the subgroup on a sorted, closed element set; gens may seed the generating set.
inline Subgroup make_subgroup(const FiniteGroup& parent, std::vector<std::size_t> elems,
                              std::vector<std::size_t> seed_gens = {}) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  auto d = std::make_shared<FiniteGroup::Data>();
  d->label = parent.label() + " subgroup of order " + std::to_string(elems.size());
  d->modulus = parent.modulus();
  d->matrix_dim = parent.matrix_dim();
  for (auto x : elems) d->keys.push_back(parent.key(x));
  auto pos = std::make_shared<std::vector<std::uint32_t>>();
  if (elems.size() * 8 < parent.order() && parent.order() > 4096) {
    pos.reset();
  } else {
    pos->assign(parent.order(), UINT32_MAX);
    for (std::size_t i = 0; i < elems.size(); ++i) (*pos)[elems[i]] = static_cast<std::uint32_t>(i);
  }
  auto shared_elems = std::make_shared<std::vector<std::size_t>>(elems);
  d->mul_fn = [parent, pos, shared_elems](std::size_t a, std::size_t b) -> std::size_t {
    std::size_t y = parent.mul((*shared_elems)[a], (*shared_elems)[b]);
    if (pos) return (*pos)[y];
    auto it = std::lower_bound(shared_elems->begin(), shared_elems->end(), y);
    return static_cast<std::size_t>(it - shared_elems->begin());
  };
  d->lookup = [parent, shared_elems](const Key& k) -> std::optional<std::size_t> {
    auto x = parent.index_of(k);
    if (!x) return std::nullopt;
    auto it = std::lower_bound(shared_elems->begin(), shared_elems->end(), *x);
    if (it == shared_elems->end() || *it != *x) return std::nullopt;
    return static_cast<std::size_t>(it - shared_elems->begin());
  };
  detail::fill_table(*d);
  std::size_t n = elems.size();
  auto mul = [&](std::size_t a, std::size_t b) -> std::size_t {
    return d->table.empty() ? d->mul_fn(a, b) : d->table[a * n + b];
  };
  auto id = std::lower_bound(elems.begin(), elems.end(), parent.identity());
  ensure(id != elems.end() && *id == parent.identity(), "subgroup misses the identity");
  d->identity = static_cast<std::size_t>(id - elems.begin());
  d->inv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::lower_bound(elems.begin(), elems.end(), parent.inv(elems[i]));
    ensure(it != elems.end() && *it == parent.inv(elems[i]), "subgroup not closed under inverses");
    d->inv[i] = static_cast<std::size_t>(it - elems.begin());
  }
  // generating set: seeds first, then greedy over elements
  std::vector<std::size_t> gens, cur{d->identity};
  auto try_add = [&](std::size_t x) {
    if (cur.size() == n || std::binary_search(cur.begin(), cur.end(), x)) return;
    gens.push_back(x);
    cur = closure_indices(gens, d->identity, n, mul);
  };
  for (auto g : seed_gens) {
    auto it = std::lower_bound(elems.begin(), elems.end(), g);
    if (it != elems.end() && *it == g) try_add(static_cast<std::size_t>(it - elems.begin()));
  }
  for (std::size_t x = 0; x < n && cur.size() < n; ++x) try_add(x);
  ensure(cur.size() == n, "element set is not closed under multiplication");
  d->gens = gens;
  return Subgroup{parent, std::move(elems), FiniteGroup(std::move(d))};
}

inline Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& gens) {
  auto elems = closure_indices(gens, g.identity(), g.order(), [&](std::size_t a, std::size_t b) { return g.mul(a, b); });
  return make_subgroup(g, std::move(elems), gens);
}

inline Subgroup whole_group(const FiniteGroup& g) {
  std::vector<std::size_t> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  return make_subgroup(g, std::move(all), g.gens());
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return make_subgroup(g, {g.identity()}); }

/// Re-expresses inner (a subgroup of the same parent, contained in outer) as a subgroup of outer.group.
inline Subgroup relative_to(const Subgroup& outer, const Subgroup& inner) {
  require(outer.contains(inner), "subgroup is not contained in the ambient subgroup");
  std::vector<std::size_t> elems;
  elems.reserve(inner.elems.size());
  for (auto x : inner.elems) elems.push_back(*outer.from_parent(x));
  return make_subgroup(outer.group, std::move(elems));
}

/// Lifts a subgroup of outer.group back to a subgroup of outer.parent.
inline Subgroup lift_to_parent(const Subgroup& outer, const Subgroup& inner_of_outer) {
  std::vector<std::size_t> elems;
  for (auto x : inner_of_outer.elems) elems.push_back(outer.to_parent(x));
  return make_subgroup(outer.parent, std::move(elems));
}

/// True if k is normalized by every element of h (both subgroups of one parent).
inline bool is_normal_in(const Subgroup& k, const Subgroup& h) {
  const auto& g = h.parent;
  for (auto hg : h.group.gens())
    for (auto kg : k.group.gens())
      if (!k.contains(g.conj(k.to_parent(kg), h.to_parent(hg)))) return false;
  return true;
}

inline std::size_t index_of_subgroup(const Subgroup& big, const Subgroup& small) {
  require(big.contains(small), "not a subgroup");
  return big.order() / small.order();
}

inline Subgroup normalizer(const Subgroup& h, const Subgroup& k) {
  // elements of h normalizing k
  const auto& g = h.parent;
  std::vector<std::size_t> out;
  for (auto x : h.elems) {
    bool ok = true;
    for (auto kg : k.group.gens())
      if (!k.contains(g.conj(k.to_parent(kg), x))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
  }
  return make_subgroup(g, std::move(out));
}

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end(), std::back_inserter(out));
  return make_subgroup(a.parent, std::move(out));
}

/// Subgroup generated by a and b inside their common parent.
inline Subgroup join(const Subgroup& a, const Subgroup& b) {
  std::vector<std::size_t> gens;
  for (auto x : a.group.gens()) gens.push_back(a.to_parent(x));
  for (auto x : b.group.gens()) gens.push_back(b.to_parent(x));
  return generated_subgroup(a.parent, gens);
}

/// Quotient h / n as a table group; element i is the coset with smallest representative.
inline FiniteGroup quotient_group(const Subgroup& h, const Subgroup& n) {
  require(h.contains(n) && is_normal_in(n, h), "quotient needs a normal subgroup");
  const auto& g = h.parent;
  std::unordered_map<std::size_t, std::size_t> coset_of;
  std::vector<std::size_t> reps;
  for (auto x : h.elems) {
    if (coset_of.count(x)) continue;
    std::size_t id = reps.size();
    reps.push_back(x);
    for (auto y : n.elems) coset_of[g.mul(x, y)] = id;
  }
  std::size_t q = reps.size();
  require(q <= 4096, "quotient too large for a table");
  std::vector<std::vector<std::size_t>> table(q, std::vector<std::size_t>(q));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) table[a][b] = coset_of.at(g.mul(reps[a], reps[b]));
  return group_from_table(table, h.group.label() + " quotient");
}

}  // namespace repzeta
