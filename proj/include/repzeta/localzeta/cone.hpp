#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/core/number.hpp"

namespace repzeta {

using IVec = std::vector<i64>;

/// coef . gamma + constant
struct AffineForm {
  IVec coef;
  i64 constant = 0;
  i64 at(const IVec& g) const {
    i64 s = constant;
    for (std::size_t i = 0; i < coef.size(); ++i) s += coef[i] * g[i];
    return s;
  }
};

struct Congruence {
  AffineForm form;
  i64 modulus = 1;
};

/// {gamma in Z^n : every inequality >= 0, every congruence form = 0 mod N}.
struct Cone {
  unsigned dim = 0;
  std::vector<AffineForm> inequalities;
  std::vector<Congruence> congruences;

  bool contains(const IVec& g) const {
    for (const auto& f : inequalities)
      if (f.at(g) < 0) return false;
    for (const auto& c : congruences)
      if (normalize_mod(c.form.at(g), c.modulus) != 0) return false;
    return true;
  }

  /// gamma_i >= lo for every coordinate
  static Cone orthant(unsigned n, i64 lo = 0) {
    Cone c{n, {}, {}};
    for (unsigned i = 0; i < n; ++i) {
      IVec e(n, 0);
      e[i] = 1;
      c.inequalities.push_back({e, -lo});
    }
    return c;
  }
};

/// apex + N-span of linearly independent generators.
struct SimplicialPiece {
  IVec apex;
  std::vector<IVec> generators;
};

class DivergentConeError : public DomainError {
public:
  using DomainError::DomainError;
};

namespace detail {

using RVec = std::vector<Rational>;

inline std::size_t rank_of(std::vector<RVec> rows) {
  std::size_t r = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

inline std::vector<RVec> to_rows(const std::vector<IVec>& v) {
  std::vector<RVec> out;
  for (const auto& x : v) out.emplace_back(x.begin(), x.end());
  return out;
}

inline std::size_t int_rank(const std::vector<IVec>& v) { return v.empty() ? 0 : rank_of(to_rows(v)); }

// a nonzero vector orthogonal to all rows (rows have rank d-1 in dimension d)
inline std::optional<IVec> null_vector(const std::vector<IVec>& rows, std::size_t d) {
  auto m = to_rows(rows);
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < d; ++j) m[i][j] -= f * m[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  if (r != d - 1) return std::nullopt;
  std::size_t free = 0;
  while (std::find(pivcol.begin(), pivcol.end(), free) != pivcol.end()) ++free;
  RVec v(d, 0);
  v[free] = 1;
  for (std::size_t i = 0; i < r; ++i) v[pivcol[i]] = -m[i][free];
  BigInt l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, denominator(x));
  IVec out(d);
  BigInt g = 0;
  std::vector<BigInt> big(d);
  for (std::size_t i = 0; i < d; ++i) {
    big[i] = numerator(v[i] * l);
    g = boost::multiprecision::gcd(g, abs(big[i]));
  }
  for (std::size_t i = 0; i < d; ++i) out[i] = to_int64(big[i] / g);
  return out;
}

inline i64 dot(const IVec& a, const IVec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Homogenized polyhedral cone {x : A x >= 0} in Z^d with its extreme rays and ray/constraint incidences.
struct HCone {
  std::size_t d = 0;
  std::vector<IVec> cons;
  std::vector<IVec> rays;
  std::vector<std::set<std::size_t>> tight;  // per constraint, indices of tight rays
};

inline void choose_subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                           const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (cur.size() == k) {
    f(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    choose_subsets(n, k, i + 1, cur, f);
    cur.pop_back();
  }
}

inline HCone make_hcone(std::vector<IVec> cons, std::size_t d) {
  HCone h;
  h.d = d;
  h.cons = std::move(cons);
  if (int_rank(h.cons) < d) throw DomainError("cone is not pointed (it contains a line)");
  std::set<IVec> found;
  std::vector<std::size_t> cur;
  choose_subsets(h.cons.size(), d - 1, 0, cur, [&](const std::vector<std::size_t>& idx) {
    std::vector<IVec> rows;
    for (auto i : idx) rows.push_back(h.cons[i]);
    auto v = null_vector(rows, d);
    if (!v) return;
    for (int sign : {1, -1}) {
      IVec r = *v;
      for (auto& x : r) x *= sign;
      bool ok = true;
      for (const auto& c : h.cons)
        if (dot(c, r) < 0) ok = false;
      if (ok) found.insert(r);
    }
  });
  h.rays.assign(found.begin(), found.end());
  h.tight.resize(h.cons.size());
  for (std::size_t c = 0; c < h.cons.size(); ++c)
    for (std::size_t r = 0; r < h.rays.size(); ++r)
      if (dot(h.cons[c], h.rays[r]) == 0) h.tight[c].insert(r);
  return h;
}

// Pulling triangulation of the face spanned by `face` (ray indices) of dimension `dim`.
inline std::vector<std::vector<std::size_t>> triangulate(const HCone& h, const std::vector<std::size_t>& face, std::size_t dim) {
  if (face.size() == dim) return {face};
  std::size_t r0 = face[0];
  std::set<std::vector<std::size_t>> facets;
  for (std::size_t c = 0; c < h.cons.size(); ++c) {
    std::vector<std::size_t> s;
    for (auto r : face)
      if (h.tight[c].count(r)) s.push_back(r);
    if (std::find(s.begin(), s.end(), r0) != s.end()) continue;
    std::vector<IVec> vs;
    for (auto r : s) vs.push_back(h.rays[r]);
    if (int_rank(vs) != dim - 1) continue;
    facets.insert(s);
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : facets)
    for (auto t : triangulate(h, f, dim - 1)) {
      t.insert(t.begin(), r0);
      out.push_back(std::move(t));
    }
  return out;
}

inline std::vector<RVec> invert(std::vector<RVec> a) {
  std::size_t k = a.size();
  std::vector<RVec> inv(k, RVec(k, 0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rational f = 1 / a[c][c];
    for (std::size_t j = 0; j < k; ++j) {
      a[c][j] *= f;
      inv[c][j] *= f;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational g = a[i][c];
      for (std::size_t j = 0; j < k; ++j) {
        a[i][j] -= g * a[c][j];
        inv[i][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

// Coordinates of x in the basis u (columns), assuming x lies in their span.
inline std::optional<RVec> coordinates_in(const std::vector<IVec>& u, const IVec& x) {
  std::size_t k = u.size(), d = x.size();
  // solve the Gram system (U^T U) lambda = U^T x, then confirm U lambda = x
  std::vector<RVec> a(k, RVec(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = dot(u[i], u[j]);
    a[i][k] = dot(u[i], x);
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[i][j] -= f * a[c][j];
    }
  }
  RVec lam(k);
  for (std::size_t i = 0; i < k; ++i) lam[i] = a[i][k] / a[i][i];
  for (std::size_t t = 0; t < d; ++t) {
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i) s += lam[i] * u[i][t];
    if (s != x[t]) return std::nullopt;
  }
  return lam;
}

// Integer points of Z^n satisfying the inequalities (no congruences), as simplicial pieces.
inline std::vector<SimplicialPiece> decompose_polyhedron(unsigned n, const std::vector<AffineForm>& ineq) {
  std::size_t d = n + 1;
  std::vector<IVec> cons;
  for (const auto& f : ineq) {
    IVec c = f.coef;
    c.push_back(f.constant);
    cons.push_back(c);
  }
  IVec t(d, 0);
  t[n] = 1;
  cons.push_back(t);
  auto h = make_hcone(cons, d);
  bool has_point = false;
  for (const auto& r : h.rays) {
    if (r[n] > 0) has_point = true;
    if (r[n] == 0)
      for (unsigned i = 0; i < n; ++i)
        if (r[i] < 0) throw DomainError("cone is unbounded in a negative direction");
  }
  if (!has_point) return {};
  std::vector<IVec> all;
  std::vector<std::size_t> idx(h.rays.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (const auto& r : h.rays) all.push_back(r);
  std::size_t dim = int_rank(all);
  auto simplices = triangulate(h, idx, dim);

  // generic reference point: sum of rays, perturbed lexicographically along the rays themselves
  IVec y(d, 0);
  for (const auto& r : h.rays)
    for (std::size_t i = 0; i < d; ++i) y[i] += r[i];

  std::vector<SimplicialPiece> out;
  for (const auto& s : simplices) {
    std::vector<IVec> u;
    for (auto r : s) u.push_back(h.rays[r]);
    std::size_t k = u.size();
    // facet i (opposite u_i) is open when the reference point lies strictly beyond it
    std::vector<bool> open(k, false);
    auto ly = coordinates_in(u, y);
    ensure(ly.has_value(), "reference point outside the span of a simplex");
    std::vector<RVec> lrays;
    for (const auto& r : h.rays) {
      auto l = coordinates_in(u, r);
      ensure(l.has_value(), "ray outside the span of a simplex");
      lrays.push_back(*l);
    }
    for (std::size_t i = 0; i < k; ++i) {
      Rational v = (*ly)[i];
      for (std::size_t j = 0; v == 0 && j < lrays.size(); ++j) v = lrays[j][i];
      ensure(v != 0, "degenerate tie in the half-open decomposition");
      open[i] = v < 0;
    }
    // integer points of the half-open fundamental parallelepiped
    IVec lo(d, 0), hi(d, 0);
    for (const auto& r : u)
      for (std::size_t i = 0; i < d; ++i) (r[i] < 0 ? lo[i] : hi[i]) += r[i];
    std::vector<IVec> rec;
    std::vector<std::pair<IVec, i64>> vert;  // vertex rays with their heights
    for (const auto& r : u) {
      if (r[n] == 0)
        rec.emplace_back(r.begin(), r.begin() + n);
      else
        vert.emplace_back(IVec(r.begin(), r.begin() + n), r[n]);
    }
    // only heights 0 and 1 can produce points of P
    lo[n] = std::max<i64>(lo[n], 0);
    hi[n] = std::min<i64>(hi[n], 1);
    if (lo[n] > hi[n]) continue;
    long double box = 1;
    for (std::size_t i = 0; i < d; ++i) box *= static_cast<long double>(hi[i] - lo[i] + 1);
    if (box > 2e7) throw SizeError("fundamental parallelepiped box is too large");
    // lambda = Ginv U^T q, precomputed once per simplex
    std::vector<RVec> gram(k, RVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(u[i], u[j]);
    auto ginv = invert(gram);
    std::vector<RVec> proj(k, RVec(d, 0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t2 = 0; t2 < d; ++t2)
        for (std::size_t j = 0; j < k; ++j) proj[i][t2] += ginv[i][j] * u[j][t2];
    IVec q = lo;
    RVec l(k);
    while (true) {
      bool inside = true;
      for (std::size_t i = 0; inside && i < k; ++i) {
        Rational v = 0;
        for (std::size_t t2 = 0; t2 < d; ++t2)
          if (q[t2]) v += proj[i][t2] * q[t2];
        l[i] = v;
        inside = open[i] ? (v > 0 && v <= 1) : (v >= 0 && v < 1);
      }
      if (inside) {
        // q must also lie in the span of u
        for (std::size_t t2 = 0; inside && t2 < d; ++t2) {
          Rational s2 = 0;
          for (std::size_t i = 0; i < k; ++i) s2 += l[i] * u[i][t2];
          inside = s2 == q[t2];
        }
      }
      if (inside) {
        IVec base(q.begin(), q.begin() + n);
        if (q[n] == 1) {
          out.push_back({base, rec});
        } else {
          for (const auto& [v, ht] : vert)
            if (ht == 1) {
              IVec a = base;
              for (unsigned i = 0; i < n; ++i) a[i] += v[i];
              out.push_back({a, rec});
            }
        }
      }
      std::size_t i = 0;
      while (i < d && q[i] == hi[i]) {
        q[i] = lo[i];
        ++i;
      }
      if (i == d) break;
      ++q[i];
    }
  }
  return out;
}

}  // namespace detail

/// Splits the lattice points of C into disjoint simplicial pieces. Congruences are removed by
/// passing to residue-class translates gamma = r + M delta; the polyhedron in delta is
/// homogenized, triangulated by pulling, and made disjoint with half-open facets.
inline std::vector<SimplicialPiece> decompose_cone(const Cone& c) {
  unsigned n = c.dim;
  for (const auto& f : c.inequalities) require(f.coef.size() == n, "inequality has the wrong length");
  for (const auto& g : c.congruences) {
    require(g.form.coef.size() == n, "congruence has the wrong length");
    require(g.modulus >= 1, "congruence modulus must be positive");
  }
  i64 m = 1;
  for (const auto& g : c.congruences) m = static_cast<i64>(lcm_u64(u64(m), u64(g.modulus)));
  if (m == 1) return detail::decompose_polyhedron(n, c.inequalities);
  if (std::pow(static_cast<long double>(m), n) > 1e6) throw SizeError("too many residue classes");
  std::vector<SimplicialPiece> out;
  IVec r(n, 0);
  while (true) {
    bool ok = true;
    for (const auto& g : c.congruences)
      if (normalize_mod(g.form.at(r), g.modulus) != 0) ok = false;
    if (ok) {
      std::vector<AffineForm> sub;
      for (const auto& f : c.inequalities) {
        AffineForm h{f.coef, f.at(r)};
        for (auto& x : h.coef) x *= m;
        sub.push_back(h);
      }
      for (auto piece : detail::decompose_polyhedron(n, sub)) {
        for (unsigned i = 0; i < n; ++i) piece.apex[i] = r[i] + m * piece.apex[i];
        for (auto& v : piece.generators)
          for (auto& x : v) x *= m;
        out.push_back(std::move(piece));
      }
    }
    unsigned i = 0;
    while (i < n && r[i] == m - 1) {
      r[i] = 0;
      ++i;
    }
    if (i == n) break;
    ++r[i];
  }
  return out;
}

/// Points of a piece inside the box [0, bound]^n (generators are nonnegative here).
inline std::vector<IVec> piece_points_in_box(const SimplicialPiece& p, i64 bound) {
  std::vector<IVec> out;
  std::size_t k = p.generators.size();
  std::function<void(std::size_t, IVec)> rec = [&](std::size_t i, IVec cur) {
    for (auto x : cur)
      if (x > bound) return;
    if (i == k) {
      bool in = true;
      for (auto x : cur)
        if (x < 0) in = false;
      if (in) out.push_back(cur);
      return;
    }
    const auto& v = p.generators[i];
    bool grows = std::any_of(v.begin(), v.end(), [](i64 x) { return x > 0; });
    ensure(grows, "piece generator does not increase any coordinate");
    while (true) {
      bool over = false;
      for (auto x : cur)
        if (x > bound) over = true;
      if (over) break;
      rec(i + 1, cur);
      for (std::size_t t = 0; t < cur.size(); ++t) cur[t] += v[t];
    }
  };
  rec(0, p.apex);
  return out;
}

struct PartitionReport {
  bool ok = true;
  std::string failure;
  std::size_t points = 0;
};

/// Compares the union of the pieces with C point by point in [0, bound]^n; a point covered twice fails.
inline PartitionReport check_partition(const Cone& c, const std::vector<SimplicialPiece>& pieces, i64 bound = 50) {
  PartitionReport rep;
  std::map<IVec, int> hits;
  for (const auto& p : pieces)
    for (auto& x : piece_points_in_box(p, bound)) ++hits[x];
  IVec g(c.dim, 0);
  while (true) {
    bool in = c.contains(g);
    auto it = hits.find(g);
    int h = it == hits.end() ? 0 : it->second;
    if (in) ++rep.points;
    if ((in && h != 1) || (!in && h != 0)) {
      rep.ok = false;
      rep.failure = "point covered " + std::to_string(h) + " times, cone membership " + (in ? "true" : "false");
      return rep;
    }
    unsigned i = 0;
    while (i < c.dim && g[i] == bound) {
      g[i] = 0;
      ++i;
    }
    if (i == c.dim) break;
    ++g[i];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Geometric series over cones

/// sum_t constant * p^(shift_s s + shift_c) * prod_j p^(A_j s + B_j) / (1 - p^(A_j s + B_j))
struct ConeSumTerm {
  Rational constant = 1;
  i64 shift_s = 0, shift_c = 0;
  std::vector<std::pair<i64, i64>> pairs;
};

struct ConeSumForm {
  std::vector<ConeSumTerm> terms;

  /// Adds up terms with identical exponent data.
  void normalize() {
    std::map<std::tuple<i64, i64, std::vector<std::pair<i64, i64>>>, Rational> acc;
    for (auto& t : terms) {
      std::sort(t.pairs.begin(), t.pairs.end());
      acc[{t.shift_s, t.shift_c, t.pairs}] += t.constant;
    }
    terms.clear();
    for (auto& [k, c] : acc)
      if (c != 0) terms.push_back({c, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
  }

  void scale(const Rational& c, i64 ds = 0, i64 dc = 0) {
    for (auto& t : terms) {
      t.constant *= c;
      t.shift_s += ds;
      t.shift_c += dc;
    }
  }
};

namespace detail {

inline Rational exact_power(u64 p, i64 e) { return rational_pow(Rational(BigInt(p)), e); }

}  // namespace detail

/// Exact value at an integer s.
inline Rational evaluate_exact(const ConeSumForm& f, u64 p, i64 s) {
  Rational total = 0;
  for (const auto& t : f.terms) {
    Rational v = t.constant * detail::exact_power(p, t.shift_s * s + t.shift_c);
    for (auto [a, b] : t.pairs) {
      Rational x = detail::exact_power(p, a * s + b);
      if (x == 1) throw DomainError("denominator 1 - p^(As+B) vanishes");
      v *= x / (1 - x);
    }
    total += v;
  }
  return total;
}

inline long double evaluate(const ConeSumForm& f, u64 p, const Rational& s) {
  long double sr = to_real(s), lp = std::log(static_cast<long double>(p)), total = 0;
  for (const auto& t : f.terms) {
    long double v = to_real(t.constant) * std::exp(lp * (t.shift_s * sr + t.shift_c));
    for (auto [a, b] : t.pairs) {
      long double e = a * sr + b;
      if (e == 0) throw DomainError("denominator 1 - p^(As+B) vanishes");
      long double x = std::exp(lp * e);
      v *= x / (1 - x);
    }
    total += v;
  }
  return total;
}

/// Closed form of sum_{gamma in C} p^(-s nbar.gamma + mbar.gamma), one geometric series per generator.
inline ConeSumForm cone_geometric_sum(const Cone& c, const IVec& nbar, const IVec& mbar) {
  require(nbar.size() == c.dim && mbar.size() == c.dim, "exponent vectors have the wrong length");
  ConeSumForm out;
  for (const auto& piece : decompose_cone(c)) {
    ConeSumTerm t;
    t.shift_s = -detail::dot(nbar, piece.apex);
    t.shift_c = detail::dot(mbar, piece.apex);
    for (const auto& v : piece.generators) {
      i64 nv = detail::dot(nbar, v), mv = detail::dot(mbar, v);
      if (!(nv > 0 || (nv == 0 && mv < 0))) {
        std::string g;
        for (auto x : v) g += (g.empty() ? "" : ",") + std::to_string(x);
        throw DivergentConeError("geometric series diverges along generator (" + g + ")");
      }
      t.pairs.emplace_back(-nv, mv);
      t.shift_s += nv;
      t.shift_c -= mv;
    }
    out.terms.push_back(std::move(t));
  }
  out.normalize();
  return out;
}

/// Direct summation over C within [0, bound]^n, for checking closed forms.
inline long double cone_direct_sum(const Cone& c, const IVec& nbar, const IVec& mbar, u64 p, const Rational& s,
                                   i64 bound) {
  long double sr = to_real(s), lp = std::log(static_cast<long double>(p)), total = 0;
  IVec g(c.dim, 0);
  while (true) {
    if (c.contains(g)) total += std::exp(lp * (-sr * detail::dot(nbar, g) + detail::dot(mbar, g)));
    unsigned i = 0;
    while (i < c.dim && g[i] == bound) {
      g[i] = 0;
      ++i;
    }
    if (i == c.dim) break;
    ++g[i];
  }
  return total;
}

}  // namespace repzeta
