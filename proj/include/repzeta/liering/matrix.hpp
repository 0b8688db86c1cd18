#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"

namespace repzeta {

/// Square matrix over Z/p^k, row-major, entries in [0, q).
struct ModMatrix {
  unsigned n = 0;
  u64 p = 2;
  unsigned k = 1;
  i64 q = 2;
  std::vector<i64> a;

  ModMatrix() = default;
  ModMatrix(unsigned n_, u64 p_, unsigned k_) : n(n_), p(p_), k(k_), q(static_cast<i64>(ipow(p_, k_))), a(n_ * n_, 0) {
    require(is_prime(p_), "modulus must be a prime power");
    require(k_ >= 1, "level must be at least 1");
  }

  static ModMatrix identity(unsigned n, u64 p, unsigned k) {
    ModMatrix m(n, p, k);
    for (unsigned i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  /// Elementary matrix E_{ij} (0-based).
  static ModMatrix unit(unsigned n, u64 p, unsigned k, unsigned i, unsigned j, i64 v = 1) {
    ModMatrix m(n, p, k);
    m(i, j) = normalize_mod(v, m.q);
    return m;
  }
  static ModMatrix from_rows(const std::vector<std::vector<i64>>& rows, u64 p, unsigned k) {
    ModMatrix m(static_cast<unsigned>(rows.size()), p, k);
    for (unsigned i = 0; i < m.n; ++i) {
      require(rows[i].size() == m.n, "matrix must be square");
      for (unsigned j = 0; j < m.n; ++j) m(i, j) = normalize_mod(rows[i][j], m.q);
    }
    return m;
  }

  i64& operator()(unsigned i, unsigned j) { return a[i * n + j]; }
  i64 operator()(unsigned i, unsigned j) const { return a[i * n + j]; }

  bool is_zero() const {
    for (auto v : a)
      if (v) return false;
    return true;
  }
  bool same_shape(const ModMatrix& o) const { return n == o.n && q == o.q; }

  friend bool operator==(const ModMatrix& x, const ModMatrix& y) { return x.same_shape(y) && x.a == y.a; }

  friend ModMatrix operator+(ModMatrix x, const ModMatrix& y) {
    require(x.same_shape(y), "matrix shapes differ");
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] = (x.a[i] + y.a[i]) % x.q;
    return x;
  }
  friend ModMatrix operator-(ModMatrix x, const ModMatrix& y) {
    require(x.same_shape(y), "matrix shapes differ");
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] = normalize_mod(x.a[i] - y.a[i], x.q);
    return x;
  }
  friend ModMatrix operator*(const ModMatrix& x, const ModMatrix& y) {
    require(x.same_shape(y), "matrix shapes differ");
    ModMatrix z(x.n, x.p, x.k);
    for (unsigned i = 0; i < x.n; ++i)
      for (unsigned l = 0; l < x.n; ++l) {
        i64 v = x(i, l);
        if (!v) continue;
        for (unsigned j = 0; j < x.n; ++j) z(i, j) = (z(i, j) + v * y(l, j)) % x.q;
      }
    return z;
  }
  ModMatrix scaled(i64 c) const {
    ModMatrix z = *this;
    c = normalize_mod(c, q);
    for (auto& v : z.a) v = v * c % q;
    return z;
  }

  std::string to_string() const {
    std::string s = "[";
    for (unsigned i = 0; i < n; ++i) {
      s += i ? ",[" : "[";
      for (unsigned j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }
};

inline ModMatrix commutator(const ModMatrix& x, const ModMatrix& y) { return x * y - y * x; }

inline bool is_nilpotent(const ModMatrix& m) {
  ModMatrix x = m;
  for (unsigned i = 1; i < m.n; ++i) x = x * m;
  return x.is_zero();
}

/// Which series envelope exp/log enforce. `strict` is the convergence bound p > 2n; `truncation`
/// only needs every denominator below n to be a unit (n <= p), which is exact for A^n = 0.
enum class Envelope { strict, truncation };

namespace detail {

inline void check_envelope(const ModMatrix& m, Envelope env) {
  if (env == Envelope::strict) {
    if (m.p <= 2 * u64(m.n))
      throw DomainError("exp/log need p > 2n (p = " + std::to_string(m.p) + ", n = " + std::to_string(m.n) + ")");
  } else if (m.p < m.n) {
    throw DomainError("truncated exp/log need n <= p");
  }
}

// 1/m mod q for m < p
inline i64 inv_small(u64 m, const ModMatrix& ref) {
  return static_cast<i64>(invmod(m % static_cast<u64>(ref.q), static_cast<u64>(ref.q)));
}

}  // namespace detail

/// I + A + A^2/2! + ... + A^{n-1}/(n-1)!.
inline ModMatrix exp_nilpotent(const ModMatrix& a, Envelope env = Envelope::strict) {
  detail::check_envelope(a, env);
  require(is_nilpotent(a), "matrix is not nilpotent");
  ModMatrix out = ModMatrix::identity(a.n, a.p, a.k);
  ModMatrix term = out;
  for (unsigned m = 1; m < a.n; ++m) {
    term = (term * a).scaled(detail::inv_small(m, a));
    out = out + term;
  }
  return out;
}

/// (g - I) - (g - I)^2/2 + ... truncated at the nilpotency degree.
inline ModMatrix log_unipotent(const ModMatrix& g, Envelope env = Envelope::strict) {
  detail::check_envelope(g, env);
  ModMatrix x = g - ModMatrix::identity(g.n, g.p, g.k);
  require(is_nilpotent(x), "matrix is not unipotent");
  ModMatrix out(g.n, g.p, g.k);
  ModMatrix pw = ModMatrix::identity(g.n, g.p, g.k);
  for (unsigned m = 1; m < g.n; ++m) {
    pw = pw * x;
    i64 c = detail::inv_small(m, g);
    out = out + pw.scaled(m % 2 ? c : -c);
  }
  return out;
}

/// One solution x of A x = b over Z/p^k (A has `rows` rows and `cols` columns, row-major), by
/// echelon reduction with minimal-valuation pivots.
inline std::optional<std::vector<i64>> solve_mod_prime_power(std::vector<i64> a, std::vector<i64> b, std::size_t rows,
                                                             std::size_t cols, u64 p, unsigned k) {
  i64 q = static_cast<i64>(ipow(p, k));
  auto val = [&](i64 v) {
    v = normalize_mod(v, q);
    if (!v) return int(k);
    int e = 0;
    while (v % static_cast<i64>(p) == 0) {
      v /= static_cast<i64>(p);
      ++e;
    }
    return e;
  };
  auto at = [&](std::size_t r, std::size_t c) -> i64& { return a[r * cols + c]; };
  struct Pivot {
    std::size_t row, col;
    int v;
  };
  std::vector<Pivot> piv;
  std::size_t r0 = 0;
  for (std::size_t c = 0; c < cols && r0 < rows; ++c) {
    std::size_t best = rows;
    int bv = int(k);
    for (std::size_t r = r0; r < rows; ++r) {
      int v = val(at(r, c));
      if (v < bv) {
        bv = v;
        best = r;
      }
    }
    if (best == rows) continue;
    if (best != r0) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(best, j), at(r0, j));
      std::swap(b[best], b[r0]);
    }
    i64 pv = ipow(p, bv);
    i64 unit = at(r0, c) / pv;
    i64 uinv = static_cast<i64>(invmod(normalize_mod(unit, q), q));
    for (std::size_t r = r0 + 1; r < rows; ++r) {
      i64 e = normalize_mod(at(r, c), q);
      if (!e) continue;
      i64 f = (e / pv) % q * uinv % q;  // e is divisible by pv since the pivot valuation is minimal
      for (std::size_t j = c; j < cols; ++j) at(r, j) = normalize_mod(at(r, j) - f * at(r0, j) % q, q);
      b[r] = normalize_mod(b[r] - f * b[r0] % q, q);
    }
    piv.push_back({r0, c, bv});
    ++r0;
  }
  for (std::size_t r = r0; r < rows; ++r)
    if (normalize_mod(b[r], q)) return std::nullopt;
  std::vector<i64> x(cols, 0);
  for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
    i64 rhs = normalize_mod(b[it->row], q);
    for (std::size_t j = it->col + 1; j < cols; ++j) rhs = normalize_mod(rhs - at(it->row, j) * x[j] % q, q);
    i64 pv = ipow(p, it->v);
    if (rhs % pv) return std::nullopt;
    i64 unit = at(it->row, it->col) / pv;
    i64 uinv = static_cast<i64>(invmod(normalize_mod(unit, q), q));
    x[it->col] = (rhs / pv) % q * uinv % q;
  }
  return x;
}

namespace detail {

// Row-reduces `rows` (vectors over F_p) in place to reduced echelon form; returns the rank.
inline std::size_t rref_mod_p(std::vector<std::vector<i64>>& rows, i64 p) {
  std::size_t r = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    i64 inv = static_cast<i64>(invmod(rows[r][c], p));
    for (auto& v : rows[r]) v = v * inv % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      i64 f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = normalize_mod(rows[i][j] - f * rows[r][j], p);
    }
    ++r;
  }
  rows.resize(r);
  return r;
}

inline bool in_span_mod_p(std::vector<std::vector<i64>> rows, const std::vector<i64>& v, i64 p) {
  std::size_t before = rref_mod_p(rows, p);
  rows.push_back(v);
  return rref_mod_p(rows, p) == before;
}

}  // namespace detail

}  // namespace repzeta
