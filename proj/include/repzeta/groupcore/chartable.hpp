#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "repzeta/core/cyclotomic.hpp"
#include "repzeta/core/error.hpp"
#include "repzeta/core/fp_poly.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/groupcore/classes.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta {

/// Irreducible complex characters. values[i][k] is chi_i at class k as a multiset of
/// exponent-th roots of unity (the eigenvalues of the representing matrix), which is unique.
struct CharacterTable {
  FiniteGroup group;
  std::shared_ptr<const ConjugacyClasses> classes;
  unsigned exponent = 1;
  std::vector<u64> degrees;
  std::vector<std::vector<SparseCyc>> values;

  std::size_t size() const { return degrees.size(); }

  /// Canonical coordinates of chi_i(class k) in Q(zeta_order); order must be a multiple of exponent.
  std::vector<i64> canonical(std::size_t i, std::size_t k, unsigned order = 0) const {
    if (!order) order = exponent;
    return cyclotomic_field(order).canonical(values[i][k], exponent);
  }

  std::size_t trivial() const { return 0; }
};

struct CharacterTableOptions {
  std::uint64_t seed = 0x5eed;
  std::size_t cap = kDefaultGroupCap;
  std::size_t verify_limit = 120;  // exact orthogonality check up to this many classes
};

namespace detail {

using u128 = unsigned __int128;

// Solves A x = b over F_l (A dense n x n, row-major). Returns false if A is singular.
inline bool solve_mod(std::vector<u64> a, std::vector<u64> b, std::size_t n, u64 l, std::vector<u64>& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv * n + col] == 0) ++piv;
    if (piv == n) return false;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      std::swap(b[piv], b[col]);
    }
    u64 inv = invmod(a[col * n + col], l);
    for (std::size_t j = col; j < n; ++j) a[col * n + j] = a[col * n + j] * inv % l;
    b[col] = b[col] * inv % l;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      u64 f = a[r * n + col];
      if (!f) continue;
      u64 nf = l - f;
      u64* row = &a[r * n];
      const u64* prow = &a[col * n];
      for (std::size_t j = col; j < n; ++j) row[j] = (row[j] + nf * prow[j]) % l;
      b[r] = (b[r] + nf * b[col]) % l;
    }
  }
  x = std::move(b);
  return true;
}

inline u64 isqrt_exact(u64 v, bool& ok) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  ok = r * r == v;
  return r;
}

}  // namespace detail

/// Inner product (1/|G|) sum_k |C_k| f_k conj(g_k) of class functions given as sparse
/// cyclotomic values (f exponents mod ef, g exponents mod eg). Exact.
inline Rational class_inner_product(const std::vector<std::size_t>& sizes, std::size_t order,
                                    const std::vector<SparseCyc>& f, unsigned ef, const std::vector<SparseCyc>& g,
                                    unsigned eg) {
  unsigned L = static_cast<unsigned>(lcm_u64(ef, eg));
  unsigned sf = L / ef, sg = L / eg;
  std::vector<i64> acc(L, 0);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    i64 w = static_cast<i64>(sizes[k]);
    for (const auto& a : f[k])
      for (const auto& b : g[k]) {
        unsigned idx = (a.exp * sf + L - (b.exp * sg) % L) % L;
        acc[idx] += w * a.mult * b.mult;
      }
  }
  auto canon = cyclotomic_field(L).reduce(acc);
  i64 v = 0;
  ensure(is_rational_integer(canon, &v), "inner product is not rational");
  return Rational(v, static_cast<i64>(order));
}

inline Rational inner_product(const CharacterTable& t, std::size_t i, std::size_t j) {
  return class_inner_product(t.classes->sizes, t.group.order(), t.values[i], t.exponent, t.values[j], t.exponent);
}

/// Exact row and column orthogonality; returns false on the first violation.
inline bool verify_orthogonality(const CharacterTable& t) {
  std::size_t d = t.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      if (inner_product(t, i, j) != (i == j ? 1 : 0)) return false;
  const auto& field = cyclotomic_field(t.exponent);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = k; l < d; ++l) {
      std::vector<i64> acc(t.exponent, 0);
      for (std::size_t i = 0; i < d; ++i)
        for (const auto& a : t.values[i][k])
          for (const auto& b : t.values[i][l]) acc[(a.exp + t.exponent - b.exp) % t.exponent] += i64(a.mult) * b.mult;
      auto canon = field.reduce(acc);
      i64 v = 0;
      if (!is_rational_integer(canon, &v)) return false;
      i64 want = k == l ? static_cast<i64>(t.group.order() / t.classes->sizes[k]) : 0;
      if (v != want) return false;
    }
  return true;
}

/// Burnside-Dixon-Schneider: central characters are the common eigenvectors of the class
/// matrices. Work over F_l with l = 1 mod exponent; a random combination of all class
/// matrices has simple spectrum, so a Krylov basis plus the roots of its characteristic
/// polynomial give every eigenvector at once. Values are lifted through eigenvalue
/// multiplicities computed from power maps.
inline CharacterTable character_table(const FiniteGroup& g, const CharacterTableOptions& opt = {}) {
  using detail::u128;
  std::size_t n = g.order();
  if (n > opt.cap) throw SizeError("group order " + std::to_string(n) + " exceeds character table cap");
  CharacterTable t;
  t.group = g;
  t.classes = conjugacy_classes(g);
  const auto& cc = *t.classes;
  std::size_t d = cc.count();
  t.exponent = cc.exponent;
  const unsigned e = t.exponent;
  u64 l = prime_one_mod(e, std::max<u64>(u64(1) << 30, 2 * n));
  ensure(l < (u64(1) << 32), "character table prime too large");
  u64 z = powmod(primitive_root(l), (l - 1) / e, l);

  // power maps
  std::vector<std::vector<std::uint32_t>> pw(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t x = g.identity(), rep = cc.reps[k];
    for (std::size_t i = 0; i < cc.rep_order[k]; ++i) {
      pw[k].push_back(cc.class_of[x]);
      x = g.mul(x, rep);
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::vector<std::vector<u64>> omega;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 8) throw InternalError("character table: no simple spectrum found");
    std::uniform_int_distribution<u64> dist(1, l - 1);
    std::vector<u64> r(d);
    for (auto& x : r) x = dist(rng);
    // M[k][j] = sum_c r_c * #{x in C_c : x^{-1} g_j in C_k}
    std::vector<u64> M(d * d, 0);
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t gj = cc.reps[j];
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t y = g.mul(g.inv(x), gj);
        u64& cell = M[cc.class_of[y] * d + j];
        cell += r[cc.class_of[x]];
        if (cell >= (u64(1) << 62)) cell %= l;
      }
    }
    for (auto& v : M) v %= l;
    // Krylov vectors kv[i] = M^i v
    std::vector<std::vector<u64>> kv(d + 1, std::vector<u64>(d));
    for (auto& x : kv[0]) x = dist(rng);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        u128 acc = 0;
        const u64* row = &M[k * d];
        for (std::size_t c = 0; c < d; ++c) acc += static_cast<u128>(row[c]) * kv[i][c];
        kv[i + 1][k] = static_cast<u64>(acc % l);
      }
    }
    std::vector<u64> A(d * d);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i) A[k * d + i] = kv[i][k];
    std::vector<u64> c;
    if (!detail::solve_mod(A, kv[d], d, l, c)) continue;
    fp::Poly m(d + 1);
    for (std::size_t i = 0; i < d; ++i) m[i] = (l - c[i]) % l;
    m[d] = 1;
    auto roots = fp::roots(m, l, opt.seed + attempt);
    if (roots.size() != d) continue;
    omega.assign(d, std::vector<u64>(d));
    bool ok = true;
    std::vector<u64> q(d);
    for (std::size_t ri = 0; ri < d && ok; ++ri) {
      u64 lam = roots[ri];
      q[d - 1] = 1;
      for (std::size_t i = d - 1; i > 0; --i) q[i - 1] = (m[i] + lam * q[i]) % l;
      std::vector<u64> vec(d);
      for (std::size_t k = 0; k < d; ++k) {
        u128 acc = 0;
        for (std::size_t i = 0; i < d; ++i) acc += static_cast<u128>(q[i]) * kv[i][k];
        vec[k] = static_cast<u64>(acc % l);
      }
      if (vec[0] == 0) {
        ok = false;
        break;
      }
      u64 inv0 = invmod(vec[0], l);
      for (auto& x : vec) x = x * inv0 % l;
      omega[ri] = std::move(vec);
    }
    if (ok) break;
  }

  // degrees and values mod l
  std::vector<u64> size_inv(d);
  for (std::size_t k = 0; k < d; ++k) size_inv[k] = invmod(cc.sizes[k] % l, l);
  struct Raw {
    u64 degree;
    std::vector<SparseCyc> vals;
  };
  std::vector<Raw> rows(d);
  std::map<std::size_t, std::vector<std::vector<u64>>> dft;  // order -> W[t][i] = z_o^{-ti}
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t o = cc.rep_order[k];
    if (dft.count(o)) continue;
    u64 zo_inv = invmod(powmod(z, e / o, l), l);
    std::vector<std::vector<u64>> W(o, std::vector<u64>(o));
    for (std::size_t tt = 0; tt < o; ++tt)
      for (std::size_t i = 0; i < o; ++i) W[tt][i] = powmod(zo_inv, (tt * i) % o, l);
    dft[o] = std::move(W);
  }
  for (std::size_t ci = 0; ci < d; ++ci) {
    const auto& w = omega[ci];
    u64 s = 0;
    for (std::size_t k = 0; k < d; ++k) s = (s + w[k] * w[cc.inverse_class[k]] % l * size_inv[k]) % l;
    ensure(s != 0, "degenerate central character");
    u64 f2 = (n % l) * invmod(s, l) % l;
    bool square = false;
    u64 f = detail::isqrt_exact(f2, square);
    ensure(square && f2 <= n && f >= 1 && n % f == 0, "character degree is not a divisor of the order");
    std::vector<u64> chi(d);
    for (std::size_t k = 0; k < d; ++k) chi[k] = w[k] * (f % l) % l * size_inv[k] % l;
    Raw raw{f, std::vector<SparseCyc>(d)};
    for (std::size_t k = 0; k < d; ++k) {
      std::size_t o = cc.rep_order[k];
      const auto& W = dft[o];
      u64 o_inv = invmod(o % l, l);
      u64 total = 0;
      for (std::size_t tt = 0; tt < o; ++tt) {
        u128 acc = 0;
        for (std::size_t i = 0; i < o; ++i) acc += static_cast<u128>(W[tt][i]) * chi[pw[k][i]];
        u64 a = static_cast<u64>(acc % l) * o_inv % l;
        ensure(a <= f, "eigenvalue multiplicity out of range");
        if (a) raw.vals[k].push_back({static_cast<std::uint32_t>(tt * (e / o)), static_cast<std::uint32_t>(a)});
        total += a;
      }
      ensure(total == f, "eigenvalue multiplicities do not sum to the degree");
    }
    rows[ci] = std::move(raw);
  }
  auto row_less = [](const Raw& a, const Raw& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    for (std::size_t k = 0; k < a.vals.size(); ++k) {
      const auto &x = a.vals[k], &y = b.vals[k];
      auto cmp = std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), [](const CycTerm& p, const CycTerm& q) {
        return p.exp != q.exp ? p.exp < q.exp : p.mult < q.mult;
      });
      if (cmp) return true;
      if (x != y) return false;
    }
    return false;
  };
  std::sort(rows.begin(), rows.end(), row_less);
  u64 sum_sq = 0;
  for (auto& r : rows) {
    sum_sq += r.degree * r.degree;
    t.degrees.push_back(r.degree);
    t.values.push_back(std::move(r.vals));
  }
  ensure(sum_sq == n, "sum of squared degrees differs from the group order");
  if (d <= opt.verify_limit) ensure(verify_orthogonality(t), "character table fails orthogonality");
  return t;
}

/// Values of chi_i (a character of the table's group) on the classes of a subgroup.
inline std::vector<SparseCyc> restrict_character(const CharacterTable& big, std::size_t i, const Subgroup& sub,
                                                 const ConjugacyClasses& sub_classes) {
  std::vector<SparseCyc> out;
  out.reserve(sub_classes.count());
  for (auto r : sub_classes.reps) out.push_back(big.values[i][big.classes->class_of[sub.to_parent(r)]]);
  return out;
}

/// <Res chi_i, tau_j>_K for K a subgroup of big.group with table small.
inline Rational restriction_multiplicity(const CharacterTable& big, std::size_t i, const Subgroup& sub,
                                         const CharacterTable& small, std::size_t j) {
  auto res = restrict_character(big, i, sub, *small.classes);
  return class_inner_product(small.classes->sizes, small.group.order(), res, big.exponent, small.values[j],
                             small.exponent);
}

}  // namespace repzeta
