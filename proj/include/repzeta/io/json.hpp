#pragma once

// JSON readers and writers for every descriptor the CLI accepts or prints. Exact rationals
// travel as "num/den" strings; integers may be given as JSON numbers or decimal strings.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "repzeta/arith/arith.hpp"
#include "repzeta/dirichlet/abscissa.hpp"
#include "repzeta/dirichlet/series.hpp"
#include "repzeta/groupcore/catalog.hpp"
#include "repzeta/groupcore/tree.hpp"
#include "repzeta/liering/ring.hpp"
#include "repzeta/localzeta/cone.hpp"
#include "repzeta/localzeta/vfunction.hpp"
#include "repzeta/orbit/orbit.hpp"

namespace repzeta::io {

using Json = nlohmann::ordered_json;

inline Json parse_json_text(const std::string& text, const std::string& origin = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---------------------------------------------------------------------------
// scalars

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline BigInt to_bigint(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? BigInt(j.get<u64>()) : BigInt(j.get<i64>());
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  throw InputError("expected an integer, got " + j.dump());
}

inline i64 to_i64(const Json& j) {
  BigInt v = to_bigint(j);
  require(v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max(), "integer out of range: " + j.dump());
  return v.convert_to<i64>();
}

inline u64 to_u64(const Json& j) {
  BigInt v = to_bigint(j);
  require(v >= 0 && v <= std::numeric_limits<u64>::max(), "expected a nonnegative integer, got " + j.dump());
  return v.convert_to<u64>();
}

inline Rational to_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  return Rational(to_bigint(j));
}

inline Json from_bigint(const BigInt& n) {
  if (n >= std::numeric_limits<i64>::min() && n <= std::numeric_limits<i64>::max()) return Json(n.convert_to<i64>());
  return Json(n.str());
}

inline Json from_rational(const Rational& q) { return Json(to_string(q)); }

/// Reals are printed with a fixed 17-digit format so output never depends on locale or platform.
inline Json from_real(long double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << static_cast<double>(x);
  return Json(os.str());
}

inline std::vector<i64> to_ivec(const Json& j) {
  require(j.is_array(), "expected an integer array, got " + j.dump());
  std::vector<i64> out;
  for (const auto& x : j) out.push_back(to_i64(x));
  return out;
}

inline std::vector<u64> to_uvec(const Json& j) {
  require(j.is_array(), "expected an integer array, got " + j.dump());
  std::vector<u64> out;
  for (const auto& x : j) out.push_back(to_u64(x));
  return out;
}

// ---------------------------------------------------------------------------
// dirichlet

inline Json to_json(const DirichletPoly& z) {
  Json terms = Json::array();
  for (const auto& [n, c] : z.terms()) terms.push_back(Json::array({from_bigint(n), from_rational(c)}));
  return Json{{"terms", terms}};
}

inline DirichletPoly dirichlet_from_json(const Json& j) {
  DirichletPoly z;
  for (const auto& t : field(j, "terms")) {
    require(t.is_array() && t.size() == 2, "Dirichlet term must be [n, \"num/den\"]");
    z.add(to_bigint(t[0]), to_rational(t[1]));
  }
  return z;
}

inline Json to_json(const MonomialLocalFamily& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    Json pairs = Json::array();
    for (auto [a, b] : t.pairs) pairs.push_back({a, b});
    terms.push_back(Json{{"d", t.d}, {"e", t.e}, {"pairs", pairs}});
  }
  return Json{{"terms", terms}};
}

inline MonomialLocalFamily family_from_json(const Json& j) {
  MonomialLocalFamily f;
  for (const auto& t : field(j, "terms")) {
    MonomialTerm m{to_i64(field(t, "d")), to_i64(field(t, "e")), {}};
    if (t.contains("pairs"))
      for (const auto& p : t.at("pairs")) {
        require(p.is_array() && p.size() == 2, "pair must be [A, B]");
        m.pairs.emplace_back(to_i64(p[0]), to_i64(p[1]));
      }
    f.terms.push_back(std::move(m));
  }
  return f;
}

inline Json to_json(const Abscissa& a) { return a.neg_infinity ? Json("-inf") : from_rational(a.value); }

// ---------------------------------------------------------------------------
// groups

/// {"modulus": m, "generators": [[row-major]]}, {"table": [[...]]} or {"catalog": name}.
inline FiniteGroup group_from_json(const Json& j, std::size_t cap = kDefaultGroupCap) {
  require(j.is_object(), "group description must be an object");
  if (j.contains("catalog")) {
    auto g = catalog_group(j.at("catalog").get<std::string>());
    if (g.order() > cap) throw SizeError("group order " + std::to_string(g.order()) + " exceeds cap");
    return g;
  }
  if (j.contains("table")) {
    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : j.at("table")) {
      std::vector<std::size_t> r;
      for (const auto& x : row) r.push_back(to_u64(x));
      table.push_back(std::move(r));
    }
    if (table.size() > cap) throw SizeError("group order " + std::to_string(table.size()) + " exceeds cap");
    return group_from_table(table, j.value("label", std::string("table")));
  }
  i64 m = to_i64(field(j, "modulus"));
  std::vector<Key> gens;
  for (const auto& g : field(j, "generators")) gens.push_back(to_ivec(g));
  return group_from_generators(gens, m, cap, j.value("label", std::string("matrix group")));
}

inline Json subgroup_summary(const Subgroup& s) { return Json{{"order", s.order()}}; }

inline Json to_json(const TreeNode& n) {
  Json out{{"H", n.h.order()}, {"K", n.k.order()}, {"rho", n.rho}, {"S", n.s.order()},
           {"V", n.v.order()}, {"index", n.index}, {"leaf", n.leaf}};
  if (n.leaf) {
    out["leaf_zeta"] = to_json(n.leaf_zeta);
  } else {
    Json kids = Json::array();
    for (const auto& c : n.children)
      kids.push_back(Json{{"tau", c.tau}, {"orbit_size", c.orbit_size}, {"dim_ratio", c.dim_ratio}, {"node", to_json(*c.node)}});
    out["children"] = kids;
  }
  return out;
}

inline Json to_json(const DecompositionTree& t) {
  return Json{{"p", t.p}, {"nodes", t.node_count()}, {"leaves", t.leaf_count()}, {"depth", t.depth()}, {"root", to_json(*t.root)}};
}

// ---------------------------------------------------------------------------
// Lie rings

/// {"p","k","rank","structure": [[[l, c], ...] per pair i < j in lexicographic order]},
/// {"p","k","matrix_basis": [[row-major], ...]} or {"family": name, "p", "k", ...}.
inline NilpotentLieRing liering_from_json(const Json& j) {
  require(j.is_object(), "Lie ring description must be an object");
  u64 p = to_u64(field(j, "p"));
  unsigned k = j.contains("k") ? static_cast<unsigned>(to_u64(j.at("k"))) : 1;
  if (j.contains("family")) {
    auto name = j.at("family").get<std::string>();
    if (name == "heisenberg") return heisenberg_ring(p, k);
    if (name == "upper") return upper_triangular_ring(static_cast<unsigned>(to_u64(field(j, "n"))), p, k);
    if (name == "sl2_congruence")
      return sl2_congruence_ring(p, j.contains("level") ? static_cast<unsigned>(to_u64(j.at("level"))) : 2);
    if (name == "abelian") return abelian_ring(p, static_cast<unsigned>(to_u64(field(j, "rank"))), k);
    throw InputError("unknown Lie ring family '" + name + "'");
  }
  std::string label = j.value("label", std::string("lie ring"));
  if (j.contains("matrix_basis")) {
    std::vector<ModMatrix> basis;
    for (const auto& m : j.at("matrix_basis")) {
      auto flat = to_ivec(m);
      unsigned n = 0;
      while (n * n < flat.size()) ++n;
      require(n * n == flat.size(), "matrix basis entries must be square");
      ModMatrix x(n, p, k);
      for (std::size_t i = 0; i < flat.size(); ++i) x.a[i] = normalize_mod(flat[i], x.q);
      basis.push_back(std::move(x));
    }
    return NilpotentLieRing::from_matrices(p, k, basis, label);
  }
  unsigned rank = static_cast<unsigned>(to_u64(field(j, "rank")));
  const auto& st = field(j, "structure");
  require(st.is_array() && st.size() == std::size_t(rank) * (rank - 1) / 2,
          "structure must list one bracket per pair i < j");
  std::vector<StructureEntry> entries;
  std::size_t idx = 0;
  for (unsigned a = 0; a < rank; ++a)
    for (unsigned b = a + 1; b < rank; ++b, ++idx)
      for (const auto& lc : st[idx]) {
        require(lc.is_array() && lc.size() == 2, "bracket term must be [l, c]");
        entries.push_back({a, b, static_cast<unsigned>(to_u64(lc[0])), to_i64(lc[1])});
      }
  return NilpotentLieRing::from_structure(p, k, rank, entries, label);
}

inline Json census_json(const std::vector<CoadjointOrbit>& orbits) {
  Json out = Json::array();
  for (auto [size, count] : orbit_census(orbits)) {
    u64 dim = 1;
    while (dim * dim < size) ++dim;
    out.push_back(Json{{"size", size}, {"dim", dim}, {"count", count}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// cones and V-functions

inline AffineForm form_from_json(const Json& j, unsigned n) {
  AffineForm f{to_ivec(field(j, "coef")), j.contains("constant") ? to_i64(j.at("constant")) : 0};
  require(f.coef.size() == n, "affine form has wrong length");
  return f;
}

inline Json to_json(const AffineForm& f) { return Json{{"coef", f.coef}, {"constant", f.constant}}; }

inline void read_constraints(const Json& j, unsigned n, std::vector<AffineForm>& ineq, std::vector<Congruence>& cong) {
  if (j.contains("inequalities"))
    for (const auto& f : j.at("inequalities")) ineq.push_back(form_from_json(f, n));
  if (j.contains("congruences"))
    for (const auto& c : j.at("congruences")) {
      Congruence k{form_from_json(c, n), to_i64(field(c, "modulus"))};
      require(k.modulus >= 1, "congruence modulus must be positive");
      cong.push_back(k);
    }
}

/// {"dim": n, "inequalities": [{"coef", "constant"}], "congruences": [{"coef", "constant", "modulus"}]}
inline Cone cone_from_json(const Json& j) {
  Cone c;
  c.dim = static_cast<unsigned>(to_u64(field(j, "dim")));
  read_constraints(j, c.dim, c.inequalities, c.congruences);
  return c;
}

inline Json to_json(const ConeSumForm& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    Json pairs = Json::array();
    for (auto [a, b] : t.pairs) pairs.push_back({a, b});
    terms.push_back(Json{{"constant", from_rational(t.constant)}, {"shift_s", t.shift_s}, {"shift_c", t.shift_c}, {"pairs", pairs}});
  }
  return Json{{"terms", terms}};
}

inline Json to_json(const JaikinForm& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    Json pre = Json::array();
    for (const auto& [e, c] : t.prefactor) pre.push_back(Json::array({Json(e), from_rational(c)}));
    terms.push_back(Json{{"prefactor", pre}, {"count", t.count}, {"cone", to_json(t.cone)}});
  }
  return Json{{"terms", terms}};
}

/// {"n", "pieces": [{"region": {inequalities, congruences, residues}, "phi", "psi", "count"}]}
inline VFunctionDesc vfunction_from_json(const Json& j) {
  VFunctionDesc F;
  F.n = static_cast<unsigned>(to_u64(field(j, "n")));
  for (const auto& pj : field(j, "pieces")) {
    VPiece piece;
    if (pj.contains("region")) {
      const auto& r = pj.at("region");
      read_constraints(r, F.n, piece.region.inequalities, piece.region.congruences);
      if (r.contains("residues"))
        for (const auto& x : r.at("residues"))
          piece.region.residues.push_back(x.is_null() ? std::nullopt : std::optional<std::vector<i64>>(to_ivec(x)));
    }
    piece.phi = form_from_json(field(pj, "phi"), F.n);
    piece.psi = pj.contains("psi") ? form_from_json(pj.at("psi"), F.n) : AffineForm{IVec(F.n, 0), 0};
    piece.count = pj.contains("count") ? to_ivec(pj.at("count")) : std::vector<i64>{1};
    F.pieces.push_back(std::move(piece));
  }
  return F;
}

// ---------------------------------------------------------------------------
// arithmetic descriptors

/// {"variables": ["x", "y"], "polynomials": ["y^2 - x^3 + x"]}
inline AffineVarietySpec variety_from_json(const Json& j) {
  std::vector<std::string> vars;
  for (const auto& v : field(j, "variables")) vars.push_back(v.get<std::string>());
  AffineVarietySpec out{static_cast<unsigned>(vars.size()), {}};
  if (j.contains("polynomials"))
    for (const auto& p : j.at("polynomials")) out.polynomials.push_back(parse_mpoly(p.get<std::string>(), vars));
  return out;
}

/// "all" | "none" | {"atom": [c0, c1, ...]} | {"not": f} | {"and": [f, g]} | {"or": [f, g]}
inline ArtinFormula formula_from_json(const Json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "all") return ArtinFormula::every();
    if (s == "none") return ArtinFormula::nothing();
    throw InputError("unknown formula '" + s + "'");
  }
  require(j.is_object() && j.size() == 1, "formula object must have exactly one key");
  if (j.contains("atom")) return ArtinFormula::atom(to_ivec(j.at("atom")));
  if (j.contains("not")) return ArtinFormula::negate(formula_from_json(j.at("not")));
  auto binary = [&](const char* key) {
    const auto& a = j.at(key);
    require(a.is_array() && a.size() == 2, std::string(key) + " takes two operands");
    return std::make_pair(formula_from_json(a[0]), formula_from_json(a[1]));
  };
  if (j.contains("and")) {
    auto [a, b] = binary("and");
    return ArtinFormula::both(a, b);
  }
  if (j.contains("or")) {
    auto [a, b] = binary("or");
    return ArtinFormula::either(a, b);
  }
  throw InputError("unknown formula " + j.dump());
}

inline ArtinSetSpec artin_from_json(const Json& j) {
  ArtinSetSpec s{j.contains("formula") ? formula_from_json(j.at("formula")) : ArtinFormula::nothing(), {}, {}};
  if (j.contains("include")) s.include = to_uvec(j.at("include"));
  if (j.contains("exclude")) s.exclude = to_uvec(j.at("exclude"));
  return s;
}

inline Json to_json(const LangWeilFit& f) {
  Json rows = Json::array();
  for (const auto& r : f.rows)
    rows.push_back(Json{{"p", r.p}, {"count", r.count}, {"residual", from_real(r.residual)}, {"ratio", from_real(r.ratio)},
                        {"holds", r.holds}});
  return Json{{"d", f.d},         {"mu", from_rational(f.mu)}, {"c", from_real(f.c)}, {"slope", from_real(f.slope)},
              {"inequality_holds", f.inequality_holds}, {"residuals", rows}};
}

inline Json to_json(const ArtinDensity& d) {
  return Json{{"bound", d.bound}, {"primes", d.primes}, {"members", d.members}, {"bad_reduction", d.bad},
              {"density", from_real(d.density)}};
}

inline Json to_json(const DegreeFitReport& r) {
  Json fams = Json::array();
  for (const auto& f : r.families)
    fams.push_back(Json{{"degree", qpoly_to_string(f.degree)}, {"multiplicity", qpoly_to_string(f.multiplicity)}});
  Json multisets = Json::object();
  for (const auto& [p, m] : r.multisets) {
    Json terms = Json::array();
    for (const auto& [d, c] : m) terms.push_back(Json::array({from_bigint(d), from_rational(c)}));
    multisets[std::to_string(p)] = terms;
  }
  return Json{{"fit_primes", r.fit_primes}, {"holdout", r.holdout}, {"families", fams}, {"multisets", multisets},
              {"verified", r.verified}, {"refutation", r.refutation}};
}

}  // namespace repzeta::io
