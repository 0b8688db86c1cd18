#pragma once

// Command implementations for the repzeta tool. Each takes the parsed input document and the
// global options and returns the JSON result plus an exit status (0 unless a cross-check failed).

#include <map>
#include <string>

#include "repzeta/cli/options.hpp"
#include "repzeta/cli/verify.hpp"
#include "repzeta/io/json.hpp"

namespace repzeta::cli {

struct CommandResult {
  Json output;
  int status = 0;
};

inline CommandResult cmd_zeta_group(const Json& in, const Options& opt) {
  auto g = io::group_from_json(in, opt.group_cap());
  CharacterTableOptions topt;
  topt.seed = opt.seed;
  topt.cap = opt.group_cap();
  return {io::to_json(zeta_of_table(character_table(g, topt)))};
}

/// Orbit census and zeta; the Dixon cross-check runs when the group fits the budget.
inline CommandResult cmd_orbit_zeta(const Json& in, const Options& opt) {
  auto L = io::liering_from_json(in);
  auto orbits = coadjoint_orbits(L, opt.group_cap());
  auto oz = orbit_zeta(orbits);
  Json out{{"ring", L.label()}, {"p", L.p()}, {"k", L.k()}, {"rank", L.rank()}, {"orbits", io::census_json(orbits)},
           {"zeta", io::to_json(oz)}};
  Json warnings = Json::array();
  for (const auto& w : L.warnings()) warnings.push_back(w);
  out["warnings"] = warnings;
  std::string check = "SKIPPED";
  int status = 0;
  std::size_t limit = opt.budget ? opt.group_cap() : 20000;
  if (L.size() <= limit) {
    CharacterTableOptions topt;
    topt.seed = opt.seed;
    topt.cap = opt.group_cap();
    auto t = character_table(group_from_liering(L, opt.group_cap()), topt);
    bool ok = zeta_of_table(t) == oz && compare_with_table(L, orbits, t, lazard_class_reps(L, t)).match;
    check = ok ? "MATCH" : "MISMATCH";
    status = ok ? 0 : 2;
  }
  out["cross_check"] = check;
  return {out, status};
}

/// {"cone": ..., "nbar": [...], "mbar": [...], "evaluate": {"p", "s"}?}
inline CommandResult cmd_cone_sum(const Json& in, const Options&) {
  auto c = io::cone_from_json(io::field(in, "cone"));
  auto nbar = io::to_ivec(io::field(in, "nbar")), mbar = io::to_ivec(io::field(in, "mbar"));
  require(nbar.size() == c.dim && mbar.size() == c.dim, "exponent vectors must match the cone dimension");
  auto pieces = decompose_cone(c);
  auto form = cone_geometric_sum(c, nbar, mbar);
  Json out{{"pieces", pieces.size()}, {"form", io::to_json(form)}};
  if (in.contains("evaluate")) {
    const auto& ev = in.at("evaluate");
    u64 p = io::to_u64(io::field(ev, "p"));
    require(is_prime(p), "p must be prime");
    Rational s = io::to_rational(io::field(ev, "s"));
    Json val{{"p", p}, {"s", to_string(s)}};
    if (auto k = as_integer(s)) val["exact"] = io::from_rational(evaluate_exact(form, p, *k));
    val["real"] = io::from_real(evaluate(form, p, s));
    out["value"] = val;
  }
  return {out};
}

/// {"vfunction": ..., "p", "s", "k"}; also reports the cone-sum form when it applies.
inline CommandResult cmd_vf_integral(const Json& in, const Options&) {
  auto F = io::vfunction_from_json(io::field(in, "vfunction"));
  u64 p = io::to_u64(io::field(in, "p"));
  require(is_prime(p), "p must be prime");
  Rational s = io::to_rational(io::field(in, "s"));
  unsigned k = static_cast<unsigned>(io::to_u64(io::field(in, "k")));
  Json out{{"p", p}, {"s", to_string(s)}, {"k", k}};
  auto exact_s = as_integer(s);
  long double integral = vfunction_integral(F, p, s, k);
  if (exact_s) out["exact"] = io::from_rational(vfunction_integral_exact(F, p, *exact_s, k));
  out["real"] = io::from_real(integral);
  try {
    auto J = vfunction_to_jaikin(F);
    out["jaikin"] = io::to_json(J);
    long double jv = evaluate(J, p, s);
    out["jaikin_real"] = io::from_real(jv);
    bool match = exact_s ? evaluate_exact(J, p, *exact_s) == vfunction_integral_exact(F, p, *exact_s, k)
                         : std::fabs(jv - integral) <= 1e-10L * std::max<long double>(1, std::fabs(integral));
    out["jaikin_match"] = match;
    return {out, match ? 0 : 2};
  } catch (const OutOfScopeError& e) {
    out["jaikin"] = nullptr;
    out["jaikin_note"] = e.what();
  }
  return {out};
}

namespace detail {

inline EulerPart euler_part_from_json(const Json& j) {
  EulerPart part;
  part.label = j.value("label", std::string("part"));
  part.family = io::family_from_json(io::field(j, "family"));
  if (j.contains("finite_primes")) {
    part.finite = true;
    part.finite_primes = io::to_uvec(j.at("finite_primes"));
  } else if (j.contains("residue")) {
    auto r = io::to_uvec(j.at("residue"));
    require(r.size() == 2 && r[1] >= 1, "residue must be [a, N]");
    u64 a = r[0] % r[1], n = r[1];
    part.member = [a, n](u64 p) { return p % n == a; };
  }
  return part;
}

}  // namespace detail

/// {"parts": [{"label", "family", "residue": [a, N] | "finite_primes": [...]}],
///  "archimedean": {"root_system": "A2"} | {"rank", "positive_roots"}, "bisect": bool}
inline CommandResult cmd_abscissa(const Json& in, const Options& opt) {
  EulerProductSpec spec;
  if (in.contains("parts"))
    for (const auto& pj : in.at("parts")) spec.parts.push_back(detail::euler_part_from_json(pj));
  if (in.contains("archimedean")) {
    const auto& a = in.at("archimedean");
    if (a.contains("root_system")) {
      auto rs = RootSystem::parse(a.at("root_system").get<std::string>());
      spec.archimedean = {{rs.rank(), rs.positive_roots()}};
    } else {
      spec.archimedean = {{io::to_i64(io::field(a, "rank")), io::to_i64(io::field(a, "positive_roots"))}};
    }
  }
  auto alpha = euler_abscissa(spec);
  Json out{{"abscissa", io::to_json(alpha)}};
  if (!in.value("bisect", false)) return {out};

  u64 bound = opt.prime_bound ? opt.prime_bound : 1'000'000;
  if (auto p = check_disjoint(spec, std::min<u64>(bound, 100000))) throw InputError("parts overlap at p = " + std::to_string(*p));
  // only infinite parts matter for the tail of the product
  std::vector<std::pair<std::function<bool(u64)>, LocalTerm>> local;
  Abscissa local_alpha;
  for (const auto& part : spec.parts) {
    if (part.finite) continue;
    auto member = part.member ? part.member : [](u64) { return true; };
    local.emplace_back(member, monomial_local_term(part.family));
    local_alpha = max(local_alpha, monomial_family_abscissa(part.family));
  }
  std::vector<u64> primes;
  for (u64 p : primes_up_to(bound))
    for (const auto& l : local)
      if (l.first(p)) {
        primes.push_back(p);
        break;
      }
  LocalTerm term = [&local](u64 p, long double s) -> std::optional<long double> {
    for (const auto& [member, t] : local)
      if (member(p)) return t(p, s);
    return 0.0L;
  };
  auto rep = bisect_abscissa(term, primes, BisectionOptions{bound});
  Json b{{"prime_bound", bound}, {"status", rep.status_name()}, {"local_abscissa", io::to_json(local_alpha)}};
  if (rep.status == BisectionReport::Status::ok) {
    b["estimate"] = io::from_real(rep.estimate);
    b["lo"] = io::from_real(rep.lo);
    b["hi"] = io::from_real(rep.hi);
    if (!local_alpha.neg_infinity)
      b["within_tolerance"] = std::fabs(rep.estimate - to_real(local_alpha.value)) <= 0.05L;
  }
  out["bisection"] = b;
  return {out};
}

/// Artin set descriptor; "bound" in the input or --prime-bound, default 10^6.
inline CommandResult cmd_artin_density(const Json& in, const Options& opt) {
  auto spec = io::artin_from_json(in);
  u64 bound = in.contains("bound") ? io::to_u64(in.at("bound")) : opt.prime_bound ? opt.prime_bound : 1'000'000;
  Json out = io::to_json(artin_density(spec, bound));
  if (in.value("complement", false)) out["complement"] = io::to_json(artin_density(artin_complement(spec), bound));
  return {out};
}

/// Variety descriptor plus optional "primes"; defaults to odd primes up to --prime-bound (200).
inline CommandResult cmd_langweil_fit(const Json& in, const Options& opt) {
  auto v = io::variety_from_json(in);
  std::vector<u64> primes =
      in.contains("primes") ? io::to_uvec(in.at("primes")) : odd_primes_up_to(opt.prime_bound ? opt.prime_bound : 200);
  for (u64 p : primes) require(is_prime(p), std::to_string(p) + " is not prime");
  return {io::to_json(langweil_fit(v, primes, opt.count_budget()))};
}

/// {"generators"?: [[a,b,c,d]...] (default SL2 standard), "p", "k"} and optionally
/// "fit": {"residue_class": [a, N], "fit_primes": [...], "holdout": q}.
inline CommandResult cmd_congruence_zeta(const Json& in, const Options& opt) {
  std::vector<Key> gens = sl2_standard_generators();
  if (in.contains("generators")) {
    gens.clear();
    for (const auto& g : in.at("generators")) gens.push_back(io::to_ivec(g));
  }
  Json out = Json::object();
  if (in.contains("p")) {
    u64 p = io::to_u64(in.at("p"));
    unsigned k = in.contains("k") ? static_cast<unsigned>(io::to_u64(in.at("k"))) : 1;
    auto q = congruence_quotient(gens, p, k, opt.group_cap());
    out["p"] = p;
    out["k"] = k;
    out["order"] = q.group.order();
    out["kernel_order"] = q.kernel.order();
    out["zeta"] = io::to_json(zeta_of_group(q.group));
  }
  if (in.contains("fit")) {
    const auto& f = in.at("fit");
    auto rc = io::to_uvec(io::field(f, "residue_class"));
    require(rc.size() == 2, "residue_class must be [a, N]");
    auto rep = reductive_degree_fit(gens, {rc[0], rc[1]}, io::to_uvec(io::field(f, "fit_primes")),
                                    io::to_u64(io::field(f, "holdout")), opt.group_cap());
    out["fit"] = io::to_json(rep);
  }
  require(!out.empty(), "congruence-zeta needs \"p\" or \"fit\"");
  return {out};
}

inline CommandResult cmd_verify(const std::string& suite, const Options& opt) {
  auto rep = run_suite(suite, opt);
  return {rep.to_json(), rep.pass() ? 0 : 2};
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"zeta-group",    "orbit-zeta",    "cone-sum",     "vf-integral", "abscissa",
                                                 "artin-density", "langweil-fit", "congruence-zeta", "verify"};
  return names;
}

inline CommandResult dispatch(const std::string& command, const Json& in, const Options& opt) {
  if (command == "zeta-group") return cmd_zeta_group(in, opt);
  if (command == "orbit-zeta") return cmd_orbit_zeta(in, opt);
  if (command == "cone-sum") return cmd_cone_sum(in, opt);
  if (command == "vf-integral") return cmd_vf_integral(in, opt);
  if (command == "abscissa") return cmd_abscissa(in, opt);
  if (command == "artin-density") return cmd_artin_density(in, opt);
  if (command == "langweil-fit") return cmd_langweil_fit(in, opt);
  if (command == "congruence-zeta") return cmd_congruence_zeta(in, opt);
  throw InternalError("unknown command '" + command + "'");
}

}  // namespace repzeta::cli
