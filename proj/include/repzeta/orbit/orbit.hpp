#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "repzeta/core/cyclotomic.hpp"
#include "repzeta/core/error.hpp"
#include "repzeta/dirichlet/series.hpp"
#include "repzeta/groupcore/chartable.hpp"
#include "repzeta/liering/ring.hpp"

namespace repzeta {

/// Linear functional on a Lie ring, theta[i] = theta(e_i) in Z/q.
struct DualCharacter {
  LieVec theta;
  friend bool operator==(const DualCharacter&, const DualCharacter&) = default;
};

inline i64 pair_dual(const NilpotentLieRing& L, const DualCharacter& t, const LieVec& x) {
  i64 s = 0;
  for (unsigned i = 0; i < L.rank(); ++i) s = (s + t.theta[i] * x[i]) % L.q();
  return s;
}

/// (Ad*(g) theta)(X) = theta(g X g^-1) = theta(exp(ad g) X) for g in the Lazard group of L.
/// As a map this is a right action: Ad*(gh) = Ad*(h) o Ad*(g).
inline DualCharacter coadjoint_action(const NilpotentLieRing& L, const LieVec& g, const DualCharacter& t) {
  require(g.size() == L.rank() && t.theta.size() == L.rank(), "element or functional has the wrong length");
  DualCharacter out{LieVec(L.rank())};
  for (unsigned j = 0; j < L.rank(); ++j) out.theta[j] = pair_dual(L, t, L.exp_ad(g, L.basis_vector(j)));
  return out;
}

struct CoadjointOrbit {
  std::vector<u64> members;  // radix codes of the functionals, sorted
  u64 size() const { return members.size(); }
  u64 dimension() const {
    u64 d = static_cast<u64>(std::llround(std::sqrt(static_cast<long double>(members.size()))));
    while (d * d > members.size()) --d;
    while ((d + 1) * (d + 1) <= members.size()) ++d;
    ensure(d * d == members.size(), "coadjoint orbit size is not a square");
    return d;
  }
};

namespace detail {

// matrix of Ad*(exp e_i) on dual coordinates: theta'_j = sum_l theta_l m[l][j]
inline std::vector<std::vector<i64>> coadjoint_matrix(const NilpotentLieRing& L, unsigned i) {
  unsigned r = L.rank();
  std::vector<std::vector<i64>> m(r, std::vector<i64>(r));
  for (unsigned j = 0; j < r; ++j) {
    auto col = L.exp_ad(L.basis_vector(i), L.basis_vector(j));
    for (unsigned l = 0; l < r; ++l) m[l][j] = col[l];
  }
  return m;
}

inline u64 apply_coadjoint(const NilpotentLieRing& L, const std::vector<std::vector<i64>>& m, u64 code) {
  auto t = L.decode(code);
  unsigned r = L.rank();
  u64 out = 0;
  for (unsigned j = 0; j < r; ++j) {
    i64 s = 0;
    for (unsigned l = 0; l < r; ++l) s = (s + t[l] * m[l][j]) % L.q();
    out = out * u64(L.q()) + u64(s);
  }
  return out;
}

}  // namespace detail

/// Partition of all q^rank functionals into Ad*-orbits, found breadth-first under the
/// generators exp(e_i) of the Lazard group. Orbits are ordered by smallest member.
inline std::vector<CoadjointOrbit> coadjoint_orbits(const NilpotentLieRing& L, std::size_t cap = kDefaultGroupCap) {
  u64 n = L.size();
  if (n > cap) throw SizeError("dual has " + std::to_string(n) + " elements, above the cap");
  std::vector<std::vector<std::vector<i64>>> gens;
  for (unsigned i = 0; i < L.rank(); ++i) gens.push_back(detail::coadjoint_matrix(L, i));
  std::vector<std::uint32_t> seen(n, UINT32_MAX);
  std::vector<CoadjointOrbit> out;
  for (u64 s = 0; s < n; ++s) {
    if (seen[s] != UINT32_MAX) continue;
    auto id = static_cast<std::uint32_t>(out.size());
    CoadjointOrbit o;
    o.members.push_back(s);
    seen[s] = id;
    for (std::size_t i = 0; i < o.members.size(); ++i)
      for (const auto& m : gens) {
        u64 t = detail::apply_coadjoint(L, m, o.members[i]);
        if (seen[t] == UINT32_MAX) {
          seen[t] = id;
          o.members.push_back(t);
        }
      }
    std::sort(o.members.begin(), o.members.end());
    out.push_back(std::move(o));
  }
  return out;
}

/// The orbit of a single functional.
inline CoadjointOrbit orbit_of(const NilpotentLieRing& L, const DualCharacter& t) {
  std::vector<std::vector<std::vector<i64>>> gens;
  for (unsigned i = 0; i < L.rank(); ++i) gens.push_back(detail::coadjoint_matrix(L, i));
  CoadjointOrbit o;
  std::set<u64> seen{L.encode(t.theta)};
  o.members.push_back(L.encode(t.theta));
  for (std::size_t i = 0; i < o.members.size(); ++i)
    for (const auto& m : gens) {
      u64 c = detail::apply_coadjoint(L, m, o.members[i]);
      if (seen.insert(c).second) o.members.push_back(c);
    }
  std::sort(o.members.begin(), o.members.end());
  return o;
}

/// One irreducible of dimension |O|^(1/2) per orbit.
inline DirichletPoly orbit_zeta(const std::vector<CoadjointOrbit>& orbits) {
  DirichletPoly z;
  for (const auto& o : orbits) z.add(BigInt(o.dimension()), 1);
  return z;
}

inline DirichletPoly orbit_zeta(const NilpotentLieRing& L) { return orbit_zeta(coadjoint_orbits(L)); }

/// Orbit census: orbit size -> number of orbits.
inline std::map<u64, u64> orbit_census(const std::vector<CoadjointOrbit>& orbits) {
  std::map<u64, u64> c;
  for (const auto& o : orbits) ++c[o.size()];
  return c;
}

/// |O|^(-1/2) sum_{phi in O} exp(2 pi i phi(log g) / q), as canonical coordinates in Q(zeta_q).
/// In the Lazard group log g is g itself.
inline std::vector<i64> kirillov_character(const NilpotentLieRing& L, const CoadjointOrbit& o, const LieVec& g) {
  i64 q = L.q();
  std::vector<i64> acc(static_cast<std::size_t>(q), 0);
  for (auto code : o.members) {
    auto phi = L.decode(code);
    ++acc[static_cast<std::size_t>(pair_dual(L, DualCharacter{phi}, g))];
  }
  auto canon = cyclotomic_field(static_cast<unsigned>(q)).reduce(acc);
  i64 d = static_cast<i64>(o.dimension());
  for (auto& v : canon) {
    ensure(v % d == 0, "Kirillov character value is not an algebraic integer");
    v /= d;
  }
  return canon;
}

struct KirillovComparison {
  bool match = false;
  std::size_t orbits = 0, classes = 0;
  std::vector<std::size_t> row_of_orbit;  // Dixon row index for each orbit
};

/// Builds the orbits x classes Kirillov matrix and matches it row by row against a Dixon table
/// whose class representatives are given in ring coordinates.
inline KirillovComparison compare_with_table(const NilpotentLieRing& L, const std::vector<CoadjointOrbit>& orbits,
                                             const CharacterTable& t, const std::vector<LieVec>& class_reps) {
  KirillovComparison rep;
  rep.orbits = orbits.size();
  rep.classes = t.classes->count();
  if (orbits.size() != t.size() || class_reps.size() != t.classes->count()) return rep;
  unsigned order = static_cast<unsigned>(L.q());
  if (order % t.exponent) return rep;
  std::map<std::vector<std::vector<i64>>, std::vector<std::size_t>> dixon_rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::vector<i64>> row;
    for (std::size_t k = 0; k < t.classes->count(); ++k) row.push_back(t.canonical(i, k, order));
    dixon_rows[row].push_back(i);
  }
  std::vector<bool> used(t.size(), false);
  for (const auto& o : orbits) {
    std::vector<std::vector<i64>> row;
    for (const auto& g : class_reps) row.push_back(kirillov_character(L, o, g));
    auto it = dixon_rows.find(row);
    if (it == dixon_rows.end()) return rep;
    std::size_t pick = t.size();
    for (auto i : it->second)
      if (!used[i]) {
        pick = i;
        break;
      }
    if (pick == t.size()) return rep;
    used[pick] = true;
    rep.row_of_orbit.push_back(pick);
  }
  rep.match = true;
  return rep;
}

/// Class representatives of the Lazard group in ring coordinates (group index = radix code).
inline std::vector<LieVec> lazard_class_reps(const NilpotentLieRing& L, const CharacterTable& t) {
  std::vector<LieVec> reps;
  for (auto r : t.classes->reps) reps.push_back(L.decode(r));
  return reps;
}

/// True iff some member of the Ad*(exp L_big)-orbit of theta restricts to tau on the subring.
inline bool restriction_test(const LieSubring& sub, const DualCharacter& theta, const DualCharacter& tau) {
  const auto& big = *sub.ambient;
  require(theta.theta.size() == big.rank(), "theta lives on the wrong ring");
  require(tau.theta.size() == sub.basis.size(), "tau lives on the wrong ring");
  auto o = orbit_of(big, theta);
  for (auto code : o.members) {
    DualCharacter phi{big.decode(code)};
    bool ok = true;
    for (std::size_t j = 0; j < sub.basis.size() && ok; ++j) ok = pair_dual(big, phi, sub.basis[j]) == tau.theta[j];
    if (ok) return true;
  }
  return false;
}

}  // namespace repzeta
