#pragma once

// Invariant suites behind `repzeta verify`. Each returns a machine-readable report with the
// number of checks and up to kMaxWitnesses failure witnesses.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "repzeta/cli/options.hpp"
#include "repzeta/groupcore/catalog.hpp"
#include "repzeta/groupcore/clifford.hpp"
#include "repzeta/groupcore/tree.hpp"
#include "repzeta/io/json.hpp"
#include "repzeta/liering/bch.hpp"
#include "repzeta/orbit/orbit.hpp"

namespace repzeta::cli {

using io::Json;

inline constexpr std::size_t kMaxWitnesses = 20;

class UnknownSuiteError : public InternalError {
public:
  using InternalError::InternalError;
};

struct SuiteReport {
  std::string suite;
  u64 checked = 0;
  u64 failed = 0;
  Json witnesses = Json::array();

  bool pass() const { return failed == 0 && checked > 0; }

  void record(bool ok, const std::function<Json()>& witness) {
    ++checked;
    if (ok) return;
    ++failed;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(witness());
  }

  Json to_json() const {
    return Json{{"suite", suite}, {"pass", pass()}, {"checked", checked}, {"failed", failed}, {"witnesses", witnesses}};
  }
};

// ---------------------------------------------------------------------------
// shared corpora

struct LazardCase {
  std::string name;
  NilpotentLieRing ring;
};

inline std::vector<LazardCase> lazard_suite() {
  return {{"heisenberg F5", heisenberg_ring(5)},
          {"heisenberg F7", heisenberg_ring(7)},
          {"heisenberg Z/25", heisenberg_ring(5, 2)},
          {"upper4 F7", upper_triangular_ring(4, 7)},
          {"sl2 congruence F5", sl2_congruence_ring(5)}};
}

inline Cone orthant_from(unsigned n, i64 lo) { return Cone::orthant(n, lo); }

inline std::vector<std::pair<std::string, Cone>> cone_suite() {
  std::vector<std::pair<std::string, Cone>> out;
  out.push_back({"Z>=1", orthant_from(1, 1)});
  out.push_back({"Z^2>=1", orthant_from(2, 1)});
  auto even = orthant_from(2, 1);
  even.congruences.push_back({{{1, -1}, 0}, 2});
  out.push_back({"even difference", even});
  out.push_back({"g1>=g2>=1", Cone{2, {{{1, -1}, 0}, {{0, 1}, -1}}, {}}});
  out.push_back({"wedge 2g1>=3g2", Cone{2, {{{2, -3}, 0}, {{0, 1}, 0}, {{1, 0}, -1}}, {}}});
  out.push_back({"strip g1<=4", Cone{2, {{{1, 0}, 0}, {{0, 1}, -2}, {{-1, 0}, 4}}, {}}});
  auto mod3 = Cone::orthant(2);
  mod3.congruences.push_back({{{1, 2}, 1}, 3});
  out.push_back({"g1+2g2+1 = 0 mod 3", mod3});
  out.push_back({"Z^3>=1", orthant_from(3, 1)});
  out.push_back({"chain g1>=g2>=g3>=0", Cone{3, {{{1, -1, 0}, 0}, {{0, 1, -1}, 0}, {{0, 0, 1}, 0}}, {}}});
  out.push_back(
      {"3d mixed", Cone{3, {{{1, 0, 0}, -1}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}, {{2, -1, 0}, 0}, {{1, 1, -3}, 0}}, {}}});
  auto c3 = Cone{3, {{{1, 0, 0}, 0}, {{0, 1, 0}, -2}, {{0, 0, 1}, 0}, {{1, 1, 1}, -5}}, {}};
  c3.congruences.push_back({{{1, 2, 0}, 1}, 3});
  out.push_back({"3d congruence", c3});
  return out;
}

/// Exponent data that converges on every suite cone for s >= 1.
inline std::pair<IVec, IVec> suite_exponents(unsigned n) {
  IVec nbar(n), mbar(n, 0);
  for (unsigned i = 0; i < n; ++i) nbar[i] = 2 + static_cast<i64>(i);
  mbar[0] = 1;
  return {nbar, mbar};
}

inline std::vector<std::pair<std::string, std::vector<std::string>>> curve_suite() {
  return {{"y^2 = x^3 - x", {"y^2 - x^3 + x"}}, {"y^2 = x^3 + 1", {"y^2 - x^3 - 1"}},
          {"x^2 + y^2 = 1", {"x^2 + y^2 - 1"}}, {"y = x^2", {"y - x^2"}},
          {"xy = 1", {"x*y - 1"}},              {"y^2 = x^3 + x + 1", {"y^2 - x^3 - x - 1"}}};
}

inline AffineVarietySpec plane_variety(const std::vector<std::string>& polys) {
  AffineVarietySpec v{2, {}};
  for (const auto& s : polys) v.polynomials.push_back(parse_mpoly(s, {"x", "y"}));
  return v;
}

inline std::vector<u64> odd_primes_up_to(u64 bound) {
  auto ps = primes_up_to(bound);
  if (!ps.empty() && ps.front() == 2) ps.erase(ps.begin());
  return ps;
}

// nilpotent matrix pairs in a random conjugate of the strictly upper triangular algebra
inline std::pair<ModMatrix, ModMatrix> random_nilpotent_pair(unsigned n, u64 p, unsigned k, std::mt19937_64& rng) {
  auto random_upper = [&] {
    ModMatrix m(n, p, k);
    std::uniform_int_distribution<i64> d(0, m.q - 1);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) m(i, j) = d(rng);
    return m;
  };
  auto id = ModMatrix::identity(n, p, k);
  auto inv_unipotent = [&](const ModMatrix& nil) {
    ModMatrix out = id, term = id;
    for (unsigned j = 1; j < n; ++j) {
      term = term * nil.scaled(-1);
      out = out + term;
    }
    return out;
  };
  auto up = random_upper(), t = random_upper();
  ModMatrix lo(n, p, k);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) lo(i, j) = t(j, i);
  ModMatrix c = (id + lo) * (id + up), ci = inv_unipotent(up) * inv_unipotent(lo);
  return {c * random_upper() * ci, c * random_upper() * ci};
}

// ---------------------------------------------------------------------------
// suites

inline SuiteReport verify_clifford(const Options& opt) {
  SuiteReport r{"clifford"};
  for (const auto& e : group_catalog()) {
    if (e.order > 200) continue;
    auto h = whole_group(e.build());
    auto normals = normal_subgroups(h);
    for (const auto& k : normals) {
      bool ok = static_cast<bool>(verify_clifford_sum(h, k));
      r.record(ok, [&] { return Json{{"kind", "clifford_sum"}, {"group", e.name}, {"K_order", k.order()}}; });
    }
    if (e.order <= opt.index_bound_order)
      for (const auto& k : normals) {
        auto tk = default_table_cache().get(k);
        for (const auto& mid : overgroups_of_small_index(h, k, 6))
          for (std::size_t t = 0; t < tk->size(); ++t) {
            auto rep = verify_index_bounds(h, mid, k, t);
            r.record(rep.ok, [&] {
              return Json{{"kind", "index_bounds"}, {"group", e.name}, {"H_order", mid.order()},
                          {"K_order", k.order()}, {"tau", t}, {"failure", rep.failure}};
            });
          }
      }
    default_table_cache().clear();
  }
  return r;
}

inline SuiteReport verify_orbit(const Options& opt) {
  SuiteReport r{"orbit"};
  for (const auto& c : lazard_suite()) {
    if (c.ring.size() > opt.group_cap()) continue;
    auto g = group_from_liering(c.ring, opt.group_cap());
    auto t = character_table(g);
    auto orbits = coadjoint_orbits(c.ring, opt.group_cap());
    auto oz = orbit_zeta(orbits), gz = zeta_of_table(t);
    r.record(oz == gz, [&] {
      return Json{{"kind", "zeta"}, {"ring", c.name}, {"orbit_zeta", io::to_json(oz)}, {"group_zeta", io::to_json(gz)}};
    });
    auto cmp = compare_with_table(c.ring, orbits, t, lazard_class_reps(c.ring, t));
    r.record(cmp.match, [&] { return Json{{"kind", "character_matrix"}, {"ring", c.name}}; });
  }
  return r;
}

inline SuiteReport verify_bch(const Options& opt) {
  SuiteReport r{"bch"};
  std::mt19937_64 rng(opt.seed);
  for (unsigned n = 2; n <= 4; ++n)
    for (u64 p : {7ull, 11ull})
      for (unsigned k = 1; k <= 2; ++k)
        for (unsigned t = 0; t < opt.fuzz_pairs; ++t) {
          auto [a, b] = random_nilpotent_pair(n, p, k, rng);
          auto lhs = bch(a, b, n - 1);
          auto rhs = log_unipotent(exp_nilpotent(a, Envelope::truncation) * exp_nilpotent(b, Envelope::truncation),
                                   Envelope::truncation);
          r.record(lhs == rhs, [&] { return Json{{"n", n}, {"p", p}, {"k", k}, {"a", a.a}, {"b", b.a}}; });
        }
  return r;
}

inline SuiteReport verify_cones(const Options&) {
  SuiteReport r{"cones"};
  for (const auto& [name, c] : cone_suite()) {
    auto pieces = decompose_cone(c);
    auto part = check_partition(c, pieces, c.dim == 3 ? 30 : 50);
    r.record(part.ok, [&] { return Json{{"kind", "partition"}, {"cone", name}, {"failure", part.failure}}; });
    auto [nbar, mbar] = suite_exponents(c.dim);
    auto f = cone_geometric_sum(c, nbar, mbar);
    for (u64 p : {3, 5, 7})
      for (Rational s : {Rational(1), Rational(3, 2), Rational(2)}) {
        long double closed = evaluate(f, p, s);
        long double direct = cone_direct_sum(c, nbar, mbar, p, s, c.dim == 3 ? 120 : 200);
        long double rel = std::fabs(closed - direct) / std::fabs(direct);
        r.record(direct > 0 && rel < 1e-10L, [&] {
          return Json{{"kind", "sum"}, {"cone", name}, {"p", p}, {"s", to_string(s)}, {"closed", io::from_real(closed)},
                      {"direct", io::from_real(direct)}};
        });
      }
  }
  return r;
}

inline SuiteReport verify_langweil(const Options& opt) {
  SuiteReport r{"langweil"};
  auto primes = odd_primes_up_to(opt.prime_bound ? opt.prime_bound : 200);
  for (const auto& [name, polys] : curve_suite()) {
    auto fit = langweil_fit(plane_variety(polys), primes, opt.count_budget());
    r.record(fit.d == 1 && fit.mu == 1 && fit.inequality_holds, [&, &name = name] {
      return Json{{"curve", name}, {"fit", io::to_json(fit)}};
    });
  }
  auto lines = langweil_fit(plane_variety({"x*y"}), primes, opt.count_budget());
  r.record(lines.d == 1 && lines.mu == 2 && lines.inequality_holds,
           [&] { return Json{{"curve", "xy = 0"}, {"fit", io::to_json(lines)}}; });
  return r;
}

inline SuiteReport verify_artin(const Options& opt) {
  SuiteReport r{"artin"};
  u64 bound = opt.prime_bound ? opt.prime_bound : 1'000'000;
  struct Case {
    std::string name;
    ArtinSetSpec spec;
    long double expected;
  };
  std::vector<Case> cases = {{"x^2 + 1", {ArtinFormula::atom({1, 0, 1}), {}, {}}, 0.5L},
                             {"x^3 - 2", {ArtinFormula::atom({-2, 0, 0, 1}), {}, {}}, 1.0L / 3}};
  for (const auto& c : cases) {
    auto d = artin_density(c.spec, bound);
    r.record(std::fabs(d.density - c.expected) <= 0.02L,
             [&] { return Json{{"kind", "density"}, {"set", c.name}, {"report", io::to_json(d)}}; });
    auto comp = artin_density(artin_complement(c.spec), bound);
    long double slack = static_cast<long double>(d.bad + 1) / d.primes;
    r.record(std::fabs(comp.density - (1 - d.density)) <= slack,
             [&] { return Json{{"kind", "complement"}, {"set", c.name}, {"report", io::to_json(comp)}}; });
  }
  return r;
}

inline Subgroup sl2_congruence_kernel(const FiniteGroup& g, i64 p) {
  std::vector<std::size_t> ker;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const auto& m = g.key(x);
    if (m[0] % p == 1 && m[1] % p == 0 && m[2] % p == 0 && m[3] % p == 1) ker.push_back(x);
  }
  return make_subgroup(g, ker);
}

inline SuiteReport verify_trees(const Options&) {
  SuiteReport r{"trees"};
  for (const auto& e : group_catalog()) {
    auto h = whole_group(e.build());
    for (const auto& k : normal_subgroups(h))
      for (auto p : prime_factors(e.order)) {
        if (!is_p_group_order(k.order(), p)) continue;
        auto tk = default_table_cache().get(k);
        for (std::size_t rho = 0; rho < tk->size(); ++rho) {
          auto t = decomposition_tree(h, k, rho, p);
          bool ok = zeta_via_tree(t) == relative_zeta(h, k, rho);
          r.record(ok, [&] { return Json{{"group", e.name}, {"K_order", k.order()}, {"p", p}, {"rho", rho}}; });
        }
        if (k.order() == 1) break;
      }
    default_table_cache().clear();
  }
  auto g = group_from_generators(sl2_generators(), 9);
  auto whole = whole_group(g);
  auto k = sl2_congruence_kernel(g, 3);
  auto tk = default_table_cache().get(k);
  for (std::size_t rho = 0; rho < tk->size(); ++rho) {
    bool ok = zeta_via_tree(decomposition_tree(whole, k, rho, 3)) == relative_zeta(whole, k, rho);
    r.record(ok, [&] { return Json{{"group", "SL2(Z/9)"}, {"K_order", k.order()}, {"p", 3}, {"rho", rho}}; });
  }
  default_table_cache().clear();
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"clifford", "orbit", "bch", "cones", "langweil", "artin", "trees"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const Options& opt) {
  if (name == "clifford") return verify_clifford(opt);
  if (name == "orbit") return verify_orbit(opt);
  if (name == "bch") return verify_bch(opt);
  if (name == "cones") return verify_cones(opt);
  if (name == "langweil") return verify_langweil(opt);
  if (name == "artin") return verify_artin(opt);
  if (name == "trees") return verify_trees(opt);
  throw UnknownSuiteError("unknown suite '" + name + "'");
}

}  // namespace repzeta::cli
