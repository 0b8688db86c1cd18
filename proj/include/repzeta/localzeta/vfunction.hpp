#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/localzeta/cone.hpp"

namespace repzeta {

class InsufficientLevelError : public DomainError {
public:
  using DomainError::DomainError;
};

class OutOfScopeError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Conditions on gamma = (val x_1, ..., val x_n) (each gamma_i >= 0 implicitly) plus optional
/// angular-component sets: the unit part of x_i mod p must lie in residues[i].
struct ValuationRegion {
  std::vector<AffineForm> inequalities;
  std::vector<Congruence> congruences;
  std::vector<std::optional<std::vector<i64>>> residues;  // empty or one entry per coordinate
};

/// One piece: 1_region(x) * p^(-s phi(gamma) + psi(gamma)) * count(p)^(-s).
struct VPiece {
  ValuationRegion region;
  AffineForm phi;
  AffineForm psi;          // measure-type weight, zero by default
  std::vector<i64> count;  // polynomial in p, lowest degree first; {1} for the constant 1
};

struct VFunctionDesc {
  unsigned n = 0;
  std::vector<VPiece> pieces;
};

inline BigInt count_value(const std::vector<i64>& poly, u64 p) {
  BigInt v = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * p + *it;
  return v;
}

namespace detail {

inline AffineForm padded(AffineForm f, unsigned n) {
  if (f.coef.empty()) f.coef.assign(n, 0);
  return f;
}

inline void validate(const VFunctionDesc& F) {
  for (const auto& pc : F.pieces) {
    for (const auto& f : pc.region.inequalities) require(f.coef.size() == F.n, "region inequality has the wrong length");
    for (const auto& c : pc.region.congruences) {
      require(c.form.coef.size() == F.n, "region congruence has the wrong length");
      require(c.modulus >= 1, "congruence modulus must be positive");
    }
    require(pc.region.residues.empty() || pc.region.residues.size() == F.n, "residue list has the wrong length");
    require(pc.phi.coef.empty() || pc.phi.coef.size() == F.n, "phi has the wrong length");
    require(pc.psi.coef.empty() || pc.psi.coef.size() == F.n, "psi has the wrong length");
    require(!pc.count.empty(), "count polynomial is empty");
  }
}

inline bool residue_ok(const ValuationRegion& r, unsigned i, i64 ac, u64 p) {
  if (r.residues.empty() || !r.residues[i]) return true;
  for (auto v : *r.residues[i])
    if (normalize_mod(v, static_cast<i64>(p)) == ac) return true;
  return false;
}

inline i64 residue_count(const ValuationRegion& r, unsigned i, u64 p) {
  if (r.residues.empty() || !r.residues[i]) return static_cast<i64>(p) - 1;
  std::set<i64> s;
  for (auto v : *r.residues[i]) {
    i64 a = normalize_mod(v, static_cast<i64>(p));
    if (a) s.insert(a);
  }
  return static_cast<i64>(s.size());
}

// Coordinates each piece looks at: anything with a coefficient or a residue set.
inline std::vector<bool> tested_coordinates(const VFunctionDesc& F) {
  std::vector<bool> t(F.n, false);
  for (const auto& pc : F.pieces) {
    auto mark = [&](const AffineForm& f) {
      for (unsigned i = 0; i < f.coef.size(); ++i)
        if (f.coef[i]) t[i] = true;
    };
    for (const auto& f : pc.region.inequalities) mark(f);
    for (const auto& c : pc.region.congruences) mark(c.form);
    mark(pc.phi);
    mark(pc.psi);
    for (unsigned i = 0; i < pc.region.residues.size(); ++i)
      if (pc.region.residues[i]) t[i] = true;
  }
  return t;
}

// The region restricted to gamma_j fixed for j outside `tail`, gamma_i >= k on `tail`, as a cone
// in the tail variables. Returns nullopt when a fixed coordinate already fails.
struct TailCone {
  Cone cone;
  std::vector<unsigned> vars;
};

inline TailCone tail_cone(const ValuationRegion& r, unsigned n, const std::vector<unsigned>& tail, const IVec& fixed,
                          i64 k) {
  TailCone tc;
  tc.vars = tail;
  unsigned m = static_cast<unsigned>(tail.size());
  tc.cone.dim = m;
  auto restrict_form = [&](const AffineForm& f) {
    AffineForm g{IVec(m, 0), f.constant};
    std::vector<bool> is_tail(n, false);
    for (auto i : tail) is_tail[i] = true;
    for (unsigned i = 0; i < n; ++i)
      if (!is_tail[i]) g.constant += f.coef[i] * fixed[i];
    for (unsigned j = 0; j < m; ++j) g.coef[j] = f.coef[tail[j]];
    return g;
  };
  for (const auto& f : r.inequalities) tc.cone.inequalities.push_back(restrict_form(f));
  for (const auto& c : r.congruences) tc.cone.congruences.push_back({restrict_form(c.form), c.modulus});
  for (unsigned j = 0; j < m; ++j) {
    IVec e(m, 0);
    e[j] = 1;
    tc.cone.inequalities.push_back({e, -k});
  }
  return tc;
}

inline bool cone_is_empty(const Cone& c) {
  // constraints without variables decide immediately
  if (c.dim == 0) {
    for (const auto& f : c.inequalities)
      if (f.constant < 0) return true;
    for (const auto& g : c.congruences)
      if (normalize_mod(g.form.constant, g.modulus)) return true;
    return false;
  }
  return decompose_cone(c).empty();
}

struct Pattern {
  IVec gamma;      // valuations (meaningful outside the tail)
  IVec ac;         // angular components (0 where not tracked)
  std::vector<unsigned> tail;  // coordinates with val >= k
};

}  // namespace detail

/// Exponent data of one piece at a fully determined pattern, or nullopt when x is outside.
inline bool region_contains(const ValuationRegion& r, const IVec& gamma, const IVec& ac, u64 p) {
  for (const auto& f : r.inequalities)
    if (f.at(gamma) < 0) return false;
  for (const auto& c : r.congruences)
    if (normalize_mod(c.form.at(gamma), c.modulus)) return false;
  for (unsigned i = 0; i < gamma.size(); ++i)
    if (!detail::residue_ok(r, i, ac[i], p)) return false;
  return true;
}

/// Valuation and angular component of x mod p^k; val = k when x = 0 mod p^k.
inline std::pair<i64, i64> valuation_and_ac(i64 x, u64 p, unsigned k) {
  i64 q = static_cast<i64>(ipow(p, k));
  x = normalize_mod(x, q);
  if (x == 0) return {static_cast<i64>(k), 0};
  i64 v = 0;
  while (x % static_cast<i64>(p) == 0) {
    x /= static_cast<i64>(p);
    ++v;
  }
  return {v, x % static_cast<i64>(p)};
}

namespace detail {

// Generic evaluation policy: exact for integer s, long double otherwise.
struct ExactPolicy {
  using T = Rational;
  i64 s;
  T power(u64 p, i64 a_s, i64 b) const { return exact_power(p, a_s * s + b); }
  T count_term(const BigInt& c) const {
    if (c == 0) return 0;
    return rational_pow(Rational(c), -s);
  }
  T cone(const ConeSumForm& f, u64 p) const { return evaluate_exact(f, p, s); }
  static T from(const Rational& q) { return q; }
};

struct RealPolicy {
  using T = long double;
  Rational s;
  T power(u64 p, i64 a_s, i64 b) const {
    return std::exp(std::log(static_cast<long double>(p)) * (a_s * to_real(s) + b));
  }
  T count_term(const BigInt& c) const {
    if (c == 0) return 0;
    return std::pow(to_real(c), -to_real(s));
  }
  T cone(const ConeSumForm& f, u64 p) const { return evaluate(f, p, s); }
  static T from(const Rational& q) { return to_real(q); }
};

template <class Policy>
typename Policy::T piece_value(const VPiece& pc, unsigned n, const IVec& gamma, u64 p, const Policy& pol) {
  auto phi = padded(pc.phi, n), psi = padded(pc.psi, n);
  return pol.power(p, -phi.at(gamma), psi.at(gamma)) * pol.count_term(count_value(pc.count, p));
}

// Contribution of the tail cell {gamma_i >= k on tail}, other coordinates fixed, integrated exactly.
template <class Policy>
typename Policy::T tail_value(const VPiece& pc, unsigned n, const Pattern& pat, u64 p, unsigned k, const Policy& pol) {
  auto tc = tail_cone(pc.region, n, pat.tail, pat.gamma, k);
  auto phi = padded(pc.phi, n), psi = padded(pc.psi, n);
  IVec nbar, mbar;
  AffineForm phi_fixed{IVec(n, 0), phi.constant}, psi_fixed{IVec(n, 0), psi.constant};
  std::vector<bool> is_tail(n, false);
  for (auto i : pat.tail) is_tail[i] = true;
  for (unsigned i = 0; i < n; ++i)
    if (!is_tail[i]) {
      phi_fixed.constant += phi.coef[i] * pat.gamma[i];
      psi_fixed.constant += psi.coef[i] * pat.gamma[i];
    }
  Rational units = 1;
  for (auto i : pat.tail) {
    nbar.push_back(phi.coef[i]);
    mbar.push_back(psi.coef[i] - 1);  // Haar measure of {val = g, ac in R} is |R| p^(-g-1)
    units *= Rational(residue_count(pc.region, i, p), static_cast<i64>(p));
  }
  if (units == 0 || cone_is_empty(tc.cone)) return typename Policy::T(0);
  auto form = cone_geometric_sum(tc.cone, nbar, mbar);
  return Policy::from(units) * pol.power(p, -phi_fixed.constant, psi_fixed.constant) * pol.cone(form, p) *
         pol.count_term(count_value(pc.count, p));
}

}  // namespace detail

/// Valuation depth: one more than the largest constant in the descriptor's data, a level beyond
/// which the finite part of every region is visible.
inline unsigned valuation_depth(const VFunctionDesc& F) {
  i64 d = 0;
  for (const auto& pc : F.pieces) {
    for (const auto& f : pc.region.inequalities) d = std::max(d, std::abs(f.constant));
    for (const auto& c : pc.region.congruences) d = std::max(d, c.modulus);
  }
  return static_cast<unsigned>(d + 1);
}

/// F_p(x, s) at a point of (Z/p^k)^n.
template <class Policy>
typename Policy::T vfunction_eval_with(const VFunctionDesc& F, const IVec& x, u64 p, unsigned k, const Policy& pol) {
  detail::validate(F);
  require(x.size() == F.n, "point has the wrong length");
  auto tested = detail::tested_coordinates(F);
  detail::Pattern pat{IVec(F.n), IVec(F.n), {}};
  for (unsigned i = 0; i < F.n; ++i) {
    auto [v, a] = valuation_and_ac(x[i], p, k);
    pat.gamma[i] = v;
    pat.ac[i] = a;
    if (v >= static_cast<i64>(k) && tested[i]) pat.tail.push_back(i);
  }
  typename Policy::T total = 0;
  int hits = 0;
  for (const auto& pc : F.pieces) {
    if (!pat.tail.empty()) {
      // membership is known only if no gamma >= k on the tail satisfies the region
      auto tc = detail::tail_cone(pc.region, F.n, pat.tail, pat.gamma, k);
      if (!detail::cone_is_empty(tc.cone))
        throw InsufficientLevelError("valuation pattern not determined at level " + std::to_string(k));
      continue;
    }
    if (!region_contains(pc.region, pat.gamma, pat.ac, p)) continue;
    ++hits;
    total += detail::piece_value(pc, F.n, pat.gamma, p, pol);
  }
  if (hits > 1) throw InputError("V-function pieces overlap at a sampled point");
  return total;
}

inline long double vfunction_eval(const VFunctionDesc& F, const IVec& x, const Rational& s, u64 p, unsigned k) {
  return vfunction_eval_with(F, x, p, k, detail::RealPolicy{s});
}

inline Rational vfunction_eval_exact(const VFunctionDesc& F, const IVec& x, i64 s, u64 p, unsigned k) {
  return vfunction_eval_with(F, x, p, k, detail::ExactPolicy{s});
}

/// Haar integral of F_p(., s) over Z_p^n computed at level k. Points are grouped by valuation
/// pattern (val < k with angular component, or the tail val >= k); every pattern carries its
/// exact measure, and tails are summed in closed form as cone series. The result therefore does
/// not depend on k, which the tests confirm.
template <class Policy>
typename Policy::T vfunction_integral_with(const VFunctionDesc& F, u64 p, unsigned k, const Policy& pol) {
  detail::validate(F);
  require(is_prime(p), "p must be prime");
  require(k >= 1, "level must be positive");
  unsigned n = F.n;
  auto tested = detail::tested_coordinates(F);
  std::vector<bool> needs_ac(n, false);
  for (const auto& pc : F.pieces)
    for (unsigned i = 0; i < pc.region.residues.size(); ++i)
      if (pc.region.residues[i]) needs_ac[i] = true;
  // per coordinate: (gamma, ac, measure) options; gamma = -1 marks the tail
  struct Option {
    i64 gamma, ac;
    Rational measure;
  };
  std::vector<std::vector<Option>> options(n);
  for (unsigned i = 0; i < n; ++i) {
    if (!tested[i]) {
      options[i].push_back({0, 1, 1});  // integrates to 1 and nothing looks at it
      continue;
    }
    for (i64 g = 0; g < static_cast<i64>(k); ++g) {
      Rational base = detail::exact_power(p, -g - 1);
      if (needs_ac[i])
        for (i64 a = 1; a < static_cast<i64>(p); ++a) options[i].push_back({g, a, base});
      else
        options[i].push_back({g, 1, base * Rational(static_cast<i64>(p) - 1)});
    }
    options[i].push_back({-1, 0, detail::exact_power(p, -static_cast<i64>(k))});
  }
  typename Policy::T total = 0;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    detail::Pattern pat{IVec(n), IVec(n), {}};
    Rational measure = 1;
    for (unsigned i = 0; i < n; ++i) {
      const auto& o = options[i][idx[i]];
      if (o.gamma < 0) {
        pat.tail.push_back(i);
        pat.gamma[i] = static_cast<i64>(k);
      } else {
        pat.gamma[i] = o.gamma;
        pat.ac[i] = o.ac;
        measure *= o.measure;
      }
    }
    int hits = 0;
    for (const auto& pc : F.pieces) {
      if (pat.tail.empty()) {
        if (!region_contains(pc.region, pat.gamma, pat.ac, p)) continue;
        ++hits;
        total += Policy::from(measure) * detail::piece_value(pc, n, pat.gamma, p, pol);
      } else {
        bool fixed_ok = true;
        for (unsigned i = 0; i < n; ++i) {
          bool in_tail = std::find(pat.tail.begin(), pat.tail.end(), i) != pat.tail.end();
          if (!in_tail && !detail::residue_ok(pc.region, i, pat.ac[i], p)) fixed_ok = false;
        }
        if (!fixed_ok) continue;
        total += Policy::from(measure) * detail::tail_value(pc, n, pat, p, k, pol);
      }
    }
    if (hits > 1) throw InputError("V-function pieces overlap at a sampled point");
    unsigned i = 0;
    while (i < n && idx[i] + 1 == options[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == n) break;
    ++idx[i];
  }
  return total;
}

inline long double vfunction_integral(const VFunctionDesc& F, u64 p, const Rational& s, unsigned k) {
  return vfunction_integral_with(F, p, k, detail::RealPolicy{s});
}

inline Rational vfunction_integral_exact(const VFunctionDesc& F, u64 p, i64 s, unsigned k) {
  return vfunction_integral_with(F, p, k, detail::ExactPolicy{s});
}

/// Pairwise disjointness of the pieces' valuation cones, residue sets ignored unless both
/// pieces constrain the same coordinate with disjoint sets.
inline std::optional<std::pair<std::size_t, std::size_t>> find_overlap(const VFunctionDesc& F) {
  detail::validate(F);
  for (std::size_t a = 0; a < F.pieces.size(); ++a)
    for (std::size_t b = a + 1; b < F.pieces.size(); ++b) {
      const auto &ra = F.pieces[a].region, &rb = F.pieces[b].region;
      bool residues_disjoint = false;
      for (unsigned i = 0; i < F.n; ++i) {
        if (ra.residues.empty() || rb.residues.empty() || !ra.residues[i] || !rb.residues[i]) continue;
        std::set<i64> sa(ra.residues[i]->begin(), ra.residues[i]->end());
        bool common = false;
        for (auto v : *rb.residues[i]) common = common || sa.count(v);
        if (!common) residues_disjoint = true;
      }
      if (residues_disjoint) continue;
      Cone c = Cone::orthant(F.n);
      for (const auto* r : {&ra, &rb}) {
        c.inequalities.insert(c.inequalities.end(), r->inequalities.begin(), r->inequalities.end());
        c.congruences.insert(c.congruences.end(), r->congruences.begin(), r->congruences.end());
      }
      if (!detail::cone_is_empty(c)) return std::make_pair(a, b);
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Closed forms

/// prefactor(p) * count(p)^(-s) * cone(p, s), prefactor a Laurent polynomial in p.
struct JaikinConeTerm {
  std::map<i64, Rational> prefactor;
  std::vector<i64> count;
  ConeSumForm cone;
};

struct JaikinForm {
  std::vector<JaikinConeTerm> terms;
};

inline Rational laurent_value(const std::map<i64, Rational>& poly, u64 p) {
  Rational v = 0;
  for (const auto& [e, c] : poly) v += c * detail::exact_power(p, e);
  return v;
}

inline Rational evaluate_exact(const JaikinForm& f, u64 p, i64 s) {
  detail::ExactPolicy pol{s};
  Rational total = 0;
  for (const auto& t : f.terms)
    total += laurent_value(t.prefactor, p) * pol.count_term(count_value(t.count, p)) * pol.cone(t.cone, p);
  return total;
}

inline long double evaluate(const JaikinForm& f, u64 p, const Rational& s) {
  detail::RealPolicy pol{s};
  long double total = 0;
  for (const auto& t : f.terms)
    total += to_real(laurent_value(t.prefactor, p)) * pol.count_term(count_value(t.count, p)) * pol.cone(t.cone, p);
  return total;
}

/// Symbolic integral for descriptors whose regions are pure valuation cones. Each piece becomes
/// ((p-1)/p)^n times a cone series in gamma with exponent -s phi(gamma) + psi(gamma) - sum gamma.
/// Angular-component sets are explicit residues, not uniform in p, so they are rejected.
inline JaikinForm vfunction_to_jaikin(const VFunctionDesc& F) {
  detail::validate(F);
  JaikinForm out;
  for (std::size_t idx = 0; idx < F.pieces.size(); ++idx) {
    const auto& pc = F.pieces[idx];
    for (const auto& r : pc.region.residues)
      if (r) throw OutOfScopeError("piece " + std::to_string(idx) + " has a residue condition, not a valuation cone");
    auto phi = detail::padded(pc.phi, F.n), psi = detail::padded(pc.psi, F.n);
    Cone c = Cone::orthant(F.n);
    c.inequalities.insert(c.inequalities.end(), pc.region.inequalities.begin(), pc.region.inequalities.end());
    c.congruences = pc.region.congruences;
    IVec mbar = psi.coef;
    for (auto& v : mbar) v -= 1;
    JaikinConeTerm t;
    t.count = pc.count;
    t.cone = cone_geometric_sum(c, phi.coef, mbar);
    t.cone.scale(1, -phi.constant, psi.constant);
    // ((p-1)/p)^n expanded as a Laurent polynomial
    std::map<i64, Rational> pre{{0, 1}};
    for (unsigned i = 0; i < F.n; ++i) {
      std::map<i64, Rational> next;
      for (const auto& [e, v] : pre) {
        next[e] += v;
        next[e - 1] -= v;
      }
      pre = std::move(next);
    }
    t.prefactor = pre;
    out.terms.push_back(std::move(t));
  }
  return out;
}

/// The V-function whose integral is ((p-1)/p) / (1 - p^(-A s + B)): val(x) = n >= 0 weighted by
/// p^(n(-A s + B + 1)).
inline VFunctionDesc geometric_series_example(i64 A, i64 B) {
  VPiece pc;
  pc.phi = {{A}, 0};
  pc.psi = {{B + 1}, 0};
  pc.count = {1};
  return VFunctionDesc{1, {pc}};
}

}  // namespace repzeta
