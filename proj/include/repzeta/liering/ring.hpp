#pragma once

#include <array>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/groupcore/group.hpp"
#include "repzeta/liering/bch.hpp"
#include "repzeta/liering/matrix.hpp"

namespace repzeta {

using LieVec = std::vector<i64>;

struct StructureEntry {
  unsigned i, j, l;  // [e_i, e_j] has coefficient c on e_l, for i < j
  i64 c;
};

/// Nilpotent Lie ring, free of rank `rank` over Z/p^k, given by structure constants; optionally
/// with a faithful matrix realization (basis[i] represents e_i).
class NilpotentLieRing {
public:
  static NilpotentLieRing from_structure(u64 p, unsigned k, unsigned rank, const std::vector<StructureEntry>& entries,
                                         std::string label = "lie ring") {
    NilpotentLieRing L(p, k, rank, std::move(label));
    for (const auto& e : entries) {
      require(e.i < rank && e.j < rank && e.l < rank, "structure index out of range");
      require(e.i != e.j, "[e_i, e_i] must vanish");
      i64 c = normalize_mod(e.c, L.q_);
      if (e.i < e.j)
        L.c_[L.at(e.i, e.j, e.l)] = (L.c_[L.at(e.i, e.j, e.l)] + c) % L.q_;
      else
        L.c_[L.at(e.j, e.i, e.l)] = normalize_mod(L.c_[L.at(e.j, e.i, e.l)] - c, L.q_);
    }
    L.finalize();
    return L;
  }

  /// Structure constants are solved from the realization; brackets must stay in its span.
  static NilpotentLieRing from_matrices(u64 p, unsigned k, const std::vector<ModMatrix>& basis,
                                        std::string label = "matrix lie ring") {
    require(!basis.empty(), "empty matrix basis");
    NilpotentLieRing L(p, k, static_cast<unsigned>(basis.size()), std::move(label));
    for (const auto& b : basis) require(b.p == p && b.k == k && b.n == basis[0].n, "basis matrices disagree on shape");
    L.basis_ = basis;
    for (unsigned i = 0; i < L.rank_; ++i)
      for (unsigned j = i + 1; j < L.rank_; ++j) {
        auto coords = L.coordinates_of(commutator(basis[i], basis[j]));
        require(coords.has_value(), "matrix basis is not closed under brackets");
        for (unsigned l = 0; l < L.rank_; ++l) L.c_[L.at(i, j, l)] = (*coords)[l];
      }
    L.finalize();
    if (L.p_ <= 2 * u64(basis[0].n))
      L.warnings_.push_back("matrix realization of size " + std::to_string(basis[0].n) + " is outside p > 2n");
    return L;
  }

  u64 p() const { return p_; }
  unsigned k() const { return k_; }
  i64 q() const { return q_; }
  unsigned rank() const { return rank_; }
  unsigned nilpotency_class() const { return class_; }
  const std::string& label() const { return label_; }
  bool has_matrices() const { return !basis_.empty(); }
  const std::vector<ModMatrix>& matrix_basis() const { return basis_; }
  const std::vector<StructureEntry>& entries() const { return entries_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Number of elements, q^rank.
  u64 size() const { return ipow(static_cast<u64>(q_), rank_); }

  i64 constant(unsigned i, unsigned j, unsigned l) const {
    if (i == j) return 0;
    return i < j ? c_[at(i, j, l)] : normalize_mod(-c_[at(j, i, l)], q_);
  }

  LieVec zero() const { return LieVec(rank_, 0); }
  LieVec basis_vector(unsigned i) const {
    LieVec v = zero();
    v[i] = 1;
    return v;
  }

  LieVec bracket(const LieVec& x, const LieVec& y) const {
    LieVec out(rank_, 0);
    for (const auto& e : entries_) {
      i64 t = (x[e.i] * y[e.j] - x[e.j] * y[e.i]) % q_;
      out[e.l] = (out[e.l] + t * e.c) % q_;
    }
    for (auto& v : out) v = normalize_mod(v, q_);
    return out;
  }
  LieVec add(const LieVec& x, const LieVec& y) const {
    LieVec out(rank_);
    for (unsigned i = 0; i < rank_; ++i) out[i] = (x[i] + y[i]) % q_;
    return out;
  }
  LieVec scale(const LieVec& x, i64 c) const {
    LieVec out(rank_);
    c = normalize_mod(c, q_);
    for (unsigned i = 0; i < rank_; ++i) out[i] = x[i] * c % q_;
    return out;
  }
  LieVec neg(const LieVec& x) const { return scale(x, -1); }

  /// Lazard product log(exp x exp y).
  LieVec bch(const LieVec& x, const LieVec& y) const {
    return evaluate_bch(
        x, y, class_, q_, p_, zero(), [this](const LieVec& a, const LieVec& b) { return bracket(a, b); },
        [this](const LieVec& a, const LieVec& b) { return add(a, b); },
        [this](const LieVec& a, i64 c) { return scale(a, c); });
  }

  /// exp(ad x) applied to y: sum_j (ad x)^j y / j!, exact because (ad x)^class = 0 and class < p.
  LieVec exp_ad(const LieVec& x, const LieVec& y) const {
    LieVec out = y, term = y;
    for (unsigned j = 1; j <= class_; ++j) {
      term = scale(bracket(x, term), static_cast<i64>(invmod(j % u64(q_), u64(q_))));
      out = add(out, term);
    }
    return out;
  }

  ModMatrix to_matrix(const LieVec& v) const {
    require(has_matrices(), "no matrix realization");
    ModMatrix m(basis_[0].n, p_, k_);
    for (unsigned i = 0; i < rank_; ++i)
      if (v[i]) m = m + basis_[i].scaled(v[i]);
    return m;
  }

  std::optional<LieVec> coordinates_of(const ModMatrix& m) const {
    require(has_matrices(), "no matrix realization");
    std::size_t cells = std::size_t(m.n) * m.n;
    std::vector<i64> a(cells * rank_);
    for (std::size_t c = 0; c < cells; ++c)
      for (unsigned i = 0; i < rank_; ++i) a[c * rank_ + i] = basis_[i].a[c];
    auto x = solve_mod_prime_power(a, m.a, cells, rank_, p_, k_);
    if (!x) return std::nullopt;
    // the realization must reproduce m exactly (solutions of a non-free system may drift)
    if (!(to_matrix(*x) == m)) return std::nullopt;
    return x;
  }

  /// Radix index of a vector: coordinate 0 is the most significant digit.
  u64 encode(const LieVec& v) const {
    u64 r = 0;
    for (auto x : v) r = r * u64(q_) + u64(x);
    return r;
  }
  LieVec decode(u64 r) const {
    LieVec v(rank_);
    for (unsigned i = rank_; i-- > 0;) {
      v[i] = static_cast<i64>(r % u64(q_));
      r /= u64(q_);
    }
    return v;
  }

private:
  NilpotentLieRing(u64 p, unsigned k, unsigned rank, std::string label)
      : p_(p), k_(k), q_(static_cast<i64>(ipow(p, k))), rank_(rank), label_(std::move(label)) {
    require(is_prime(p), "p must be prime");
    require(k >= 1 && rank >= 1, "level and rank must be positive");
    require(rank <= 16, "rank above 16 is not supported");
    c_.assign(std::size_t(rank) * rank * rank, 0);
  }

  std::size_t at(unsigned i, unsigned j, unsigned l) const { return (std::size_t(i) * rank_ + j) * rank_ + l; }

  void finalize() {
    entries_.clear();
    for (unsigned i = 0; i < rank_; ++i)
      for (unsigned j = i + 1; j < rank_; ++j)
        for (unsigned l = 0; l < rank_; ++l)
          if (c_[at(i, j, l)]) entries_.push_back({i, j, l, c_[at(i, j, l)]});
    // Jacobi on basis triples
    for (unsigned a = 0; a < rank_; ++a)
      for (unsigned b = a + 1; b < rank_; ++b)
        for (unsigned c = b + 1; c < rank_; ++c) {
          auto ea = basis_vector(a), eb = basis_vector(b), ec = basis_vector(c);
          auto s = add(add(bracket(ea, bracket(eb, ec)), bracket(eb, bracket(ec, ea))), bracket(ec, bracket(ea, eb)));
          for (auto v : s) require(v == 0, "structure constants violate the Jacobi identity");
        }
    // nilpotency class from right-normed brackets of basis elements
    std::set<LieVec> level;
    for (unsigned i = 0; i < rank_; ++i) level.insert(basis_vector(i));
    class_ = 0;
    while (!level.empty()) {
      ++class_;
      require(class_ <= rank_ * k_ + 1, "Lie ring is not nilpotent");
      std::set<LieVec> next;
      for (unsigned i = 0; i < rank_; ++i)
        for (const auto& v : level) {
          auto w = bracket(basis_vector(i), v);
          bool nz = false;
          for (auto x : w) nz |= x != 0;
          if (nz) next.insert(std::move(w));
        }
      level = std::move(next);
    }
    if (class_ >= p_) throw DomainError("nilpotency class " + std::to_string(class_) + " is not below p");
  }

  u64 p_;
  unsigned k_;
  i64 q_;
  unsigned rank_;
  std::string label_;
  std::vector<i64> c_;
  std::vector<StructureEntry> entries_;
  std::vector<ModMatrix> basis_;
  std::vector<std::string> warnings_;
  unsigned class_ = 1;
};

// ---------------------------------------------------------------------------
// Named rings

/// Heisenberg ring over Z/p^k: basis X = E12, Y = E23, Z = E13, [X, Y] = Z.
inline NilpotentLieRing heisenberg_ring(u64 p, unsigned k = 1) {
  std::vector<ModMatrix> b = {ModMatrix::unit(3, p, k, 0, 1), ModMatrix::unit(3, p, k, 1, 2), ModMatrix::unit(3, p, k, 0, 2)};
  return NilpotentLieRing::from_matrices(p, k, b, "heisenberg(" + std::to_string(ipow(p, k)) + ")");
}

/// Strictly upper triangular n x n matrices over Z/p^k, basis E_ij ordered by (j - i, i).
inline NilpotentLieRing upper_triangular_ring(unsigned n, u64 p, unsigned k = 1) {
  std::vector<ModMatrix> b;
  for (unsigned d = 1; d < n; ++d)
    for (unsigned i = 0; i + d < n; ++i) b.push_back(ModMatrix::unit(n, p, k, i, i + d));
  return NilpotentLieRing::from_matrices(p, k, b, "upper" + std::to_string(n) + "(" + std::to_string(ipow(p, k)) + ")");
}

/// Lie ring of ker(SL2(Z/p^level) -> SL2(Z/p)): p.sl2 modulo p^level, a free Z/p^(level-1)
/// module on pE, pF, pH with [pE,pF] = p(pH), [pH,pE] = 2p(pE), [pH,pF] = -2p(pF).
inline NilpotentLieRing sl2_congruence_ring(u64 p, unsigned level = 2) {
  require(level >= 2, "congruence level must be at least 2");
  i64 pp = static_cast<i64>(p);
  // basis order: E = 0, F = 1, H = 2
  std::vector<StructureEntry> e = {{0, 1, 2, pp}, {0, 2, 0, -2 * pp}, {1, 2, 1, 2 * pp}};
  return NilpotentLieRing::from_structure(p, level - 1, 3, e,
                                          "sl2 congruence(" + std::to_string(p) + "^" + std::to_string(level) + ")");
}

/// Abelian ring (Z/p^k)^rank.
inline NilpotentLieRing abelian_ring(u64 p, unsigned rank, unsigned k = 1) {
  return NilpotentLieRing::from_structure(p, k, rank, {}, "abelian");
}

// ---------------------------------------------------------------------------
// Lazard group

/// The group on the underlying set of L with x.y = bch(x, y). Elements are indexed by radix
/// encoding, which is also the lexicographic order of coordinate keys.
inline FiniteGroup group_from_liering(const NilpotentLieRing& ring, std::size_t cap = kDefaultGroupCap) {
  u64 n = ring.size();
  if (n > cap) throw SizeError("Lie ring has " + std::to_string(n) + " elements, above the cap");
  auto L = std::make_shared<const NilpotentLieRing>(ring);
  auto d = std::make_shared<FiniteGroup::Data>();
  d->label = "lazard " + ring.label();
  d->keys.reserve(n);
  for (u64 r = 0; r < n; ++r) d->keys.push_back(L->decode(r));
  // precomputed word coefficients: the hot path avoids rational arithmetic
  struct Word {
    std::vector<unsigned char> letters;  // 0 = x, 1 = y
    i64 coef;
  };
  auto words = std::make_shared<std::vector<Word>>();
  for (const auto& w : bch_words(ring.nilpotency_class())) {
    Word c;
    for (char ch : w.letters) c.letters.push_back(ch == 'Y');
    c.coef = rational_mod(w.coef, ring.q(), ring.p());
    words->push_back(std::move(c));
  }
  auto* raw = d.get();
  d->mul_fn = [L, words, raw](std::size_t a, std::size_t b) -> std::size_t {
    const LieVec& x = raw->keys[a];
    const LieVec& y = raw->keys[b];
    unsigned r = L->rank();
    i64 q = L->q();
    std::array<i64, 16> out{}, acc{}, tmp{};
    const auto& ents = L->entries();
    for (const auto& w : *words) {
      const LieVec& last = w.letters.back() ? y : x;
      for (unsigned i = 0; i < r; ++i) acc[i] = last[i];
      for (std::size_t t = w.letters.size() - 1; t-- > 0;) {
        const LieVec& u = w.letters[t] ? y : x;
        tmp.fill(0);
        for (const auto& e : ents) tmp[e.l] += (u[e.i] * acc[e.j] - u[e.j] * acc[e.i]) % q * e.c;
        for (unsigned i = 0; i < r; ++i) acc[i] = tmp[i] % q;
      }
      for (unsigned i = 0; i < r; ++i) out[i] += acc[i] * w.coef;
    }
    u64 code = 0;
    for (unsigned i = 0; i < r; ++i) code = code * u64(q) + u64(normalize_mod(out[i] % q, q));
    return static_cast<std::size_t>(code);
  };
  d->lookup = [L, n](const Key& k) -> std::optional<std::size_t> {
    if (k.size() != L->rank()) return std::nullopt;
    for (auto v : k)
      if (v < 0 || v >= L->q()) return std::nullopt;
    return static_cast<std::size_t>(L->encode(k));
  };
  d->identity = 0;
  d->inv.resize(n);
  for (u64 r = 0; r < n; ++r) d->inv[r] = static_cast<std::size_t>(L->encode(L->neg(d->keys[r])));
  for (unsigned i = 0; i < ring.rank(); ++i) d->gens.push_back(static_cast<std::size_t>(L->encode(L->basis_vector(i))));
  detail::fill_table(*d);
  return FiniteGroup(std::move(d));
}

// ---------------------------------------------------------------------------
// Subrings

/// A subring spanned (freely) by `basis`, given in coordinates of the ambient ring, together
/// with its own structure constants.
struct LieSubring {
  std::shared_ptr<const NilpotentLieRing> ambient;
  std::vector<LieVec> basis;
  std::shared_ptr<const NilpotentLieRing> ring;  // standalone copy in subring coordinates

  LieVec embed(const LieVec& local) const {
    LieVec v = ambient->zero();
    for (std::size_t i = 0; i < basis.size(); ++i) v = ambient->add(v, ambient->scale(basis[i], local[i]));
    return v;
  }
};

inline std::optional<LieVec> solve_in_span(const NilpotentLieRing& L, const std::vector<LieVec>& basis, const LieVec& v) {
  std::size_t r = L.rank(), m = basis.size();
  std::vector<i64> a(r * m);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = basis[j][i];
  auto x = solve_mod_prime_power(a, v, r, m, L.p(), L.k());
  if (!x) return std::nullopt;
  LieVec back = L.zero();
  for (std::size_t j = 0; j < m; ++j) back = L.add(back, L.scale(basis[j], (*x)[j]));
  if (back != v) return std::nullopt;
  return x;
}

inline LieSubring make_subring(const NilpotentLieRing& ambient, std::vector<LieVec> basis) {
  require(!basis.empty(), "empty subring basis");
  for (const auto& b : basis) require(b.size() == ambient.rank(), "subring vector has the wrong length");
  // the span is free of rank m exactly when the reductions mod p are independent
  std::vector<std::vector<i64>> red;
  for (const auto& b : basis) {
    red.emplace_back();
    for (auto c : b) red.back().push_back(normalize_mod(c, static_cast<i64>(ambient.p())));
  }
  require(detail::rref_mod_p(red, static_cast<i64>(ambient.p())) == basis.size(), "subring basis is not free");
  std::vector<StructureEntry> entries;
  for (unsigned i = 0; i < basis.size(); ++i)
    for (unsigned j = i + 1; j < basis.size(); ++j) {
      auto c = solve_in_span(ambient, basis, ambient.bracket(basis[i], basis[j]));
      require(c.has_value(), "span is not closed under brackets");
      for (unsigned l = 0; l < basis.size(); ++l)
        if ((*c)[l]) entries.push_back({i, j, l, (*c)[l]});
    }
  auto amb = std::make_shared<const NilpotentLieRing>(ambient);
  auto sub = std::make_shared<const NilpotentLieRing>(NilpotentLieRing::from_structure(
      ambient.p(), ambient.k(), static_cast<unsigned>(basis.size()), entries, ambient.label() + " subring"));
  return LieSubring{amb, std::move(basis), sub};
}

}  // namespace repzeta
