// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "repzeta/cli/verify.hpp"
#include "repzeta/dirichlet/abscissa.hpp"

using namespace repzeta;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", s);
  return buf;
}

std::string suite_detail(const cli::SuiteReport& r) {
  std::ostringstream os;
  os << r.checked << " checks, " << r.failed << " failed";
  if (!r.witnesses.empty()) os << ", first witness " << r.witnesses.front().dump();
  return os.str();
}

// 1: coadjoint orbits against Dixon tables on the Lazard suite
Outcome orbit_method() {
  auto t0 = Clock::now();
  cli::Options opt;
  auto r = cli::verify_orbit(opt);
  double t = seconds_since(t0);
  bool all_rings = r.checked == 2 * cli::lazard_suite().size();
  return {r.pass() && all_rings && t < 300, suite_detail(r) + ", " + fmt_seconds(t) + " (limit 300 s)"};
}

// 2: Clifford sum over every (H, K normal) in the catalog, index bounds on small-index triples
Outcome clifford() {
  cli::Options opt;
  auto r = cli::verify_clifford(opt);
  return {r.pass(), suite_detail(r)};
}

// 3: decomposition trees over the catalog plus SL2(Z/9) with its congruence kernel
Outcome trees() {
  auto t0 = Clock::now();
  cli::Options opt;
  auto r = cli::verify_trees(opt);
  double t = seconds_since(t0);
  return {r.pass() && t < 600, suite_detail(r) + ", " + fmt_seconds(t) + " (limit 600 s)"};
}

// 4: BCH against log(exp exp) on 1000 pairs per (n, p, k)
Outcome bch_fuzz() {
  cli::Options opt;
  opt.seed = 20240611;
  opt.fuzz_pairs = 1000;
  auto r = cli::verify_bch(opt);
  return {r.pass() && r.checked == 12000, suite_detail(r)};
}

// 5: cone sums, cone-sum form of V-function integrals, and the geometric-series example
Outcome cone_pipeline() {
  cli::Options opt;
  auto r = cli::verify_cones(opt);

  VPiece a, b;
  a.region.inequalities = {{{1, -1}, 0}};
  a.phi = {{1, 2}, 1};
  a.count = {0, 1};
  b.region.inequalities = {{{-1, 1}, -1}};
  b.region.congruences = {{{{1, 0}, 0}, 2}};
  b.phi = {{2, 1}, 0};
  b.psi = {{0, 1}, 0};
  b.count = {1, 1};
  std::vector<VFunctionDesc> corpus = {VFunctionDesc{2, {a, b}}, geometric_series_example(2, 0),
                                       geometric_series_example(3, 1)};
  u64 grid = 0, grid_fail = 0;
  for (const auto& F : corpus) {
    auto J = vfunction_to_jaikin(F);
    for (u64 p : {3, 5, 7})
      for (i64 s : {1, 2, 3})
        for (unsigned k : {1u, 2u, 3u}) {
          ++grid;
          grid_fail += evaluate_exact(J, p, s) != vfunction_integral_exact(F, p, s, k);
        }
    for (u64 p : {3, 5, 7}) {
      ++grid;
      long double x = evaluate(J, p, Rational(3, 2)), y = vfunction_integral(F, p, Rational(3, 2), 2);
      grid_fail += std::fabs(x - y) > 1e-12L * std::fabs(y);
    }
  }

  u64 example = 0, example_fail = 0;
  for (auto [A, B] : std::vector<std::pair<i64, i64>>{{2, 0}, {1, 0}, {3, 1}}) {
    auto F = geometric_series_example(A, B);
    auto J = vfunction_to_jaikin(F);
    for (u64 p : {5, 7})
      for (i64 s : {1, 2, 3}) {
        if (A * s - B <= 0) continue;
        Rational want = Rational(static_cast<i64>(p) - 1, static_cast<i64>(p)) /
                        (1 - rational_pow(Rational(BigInt(p)), -A * s + B));
        for (unsigned k : {1u, 2u, 3u}) {
          ++example;
          example_fail += vfunction_integral_exact(F, p, s, k) != want;
        }
        ++example;
        example_fail += evaluate_exact(J, p, s) != want;
      }
  }
  std::ostringstream os;
  os << "cones " << suite_detail(r) << "; integral grid " << grid << " points, " << grid_fail << " off; example "
     << example << " exact checks, " << example_fail << " off";
  return {r.pass() && grid_fail == 0 && example_fail == 0, os.str()};
}

MonomialLocalFamily random_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 2), npairs(0, 2), de(0, 3), a(1, 3), b(0, 2);
  MonomialLocalFamily f;
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    MonomialTerm m{de(rng), de(rng), {}};
    int np = npairs(rng);
    for (int j = 0; j < np; ++j) m.pairs.emplace_back(a(rng), b(rng));
    if (m.e == 0 && m.pairs.empty()) m.e = 1;  // keeps e + sum A > 0
    f.terms.push_back(m);
  }
  return f;
}

std::string family_text(const MonomialLocalFamily& f) {
  std::ostringstream os;
  for (const auto& t : f.terms) {
    os << "(d=" << t.d << ",e=" << t.e;
    for (auto [a, b] : t.pairs) os << ",[" << a << "," << b << "]";
    os << ")";
  }
  return os.str();
}

// 6: abscissa formula against truncated-product bisection on random families
Outcome abscissa_bisection() {
  std::mt19937_64 rng(6);
  auto primes = primes_up_to(1'000'000);
  int checked = 0, failed = 0;
  std::string witness;
  for (int i = 0; i < 12; ++i) {
    auto f = random_family(rng);
    auto alpha = monomial_family_abscissa(f);
    auto rep = bisect_abscissa(monomial_local_term(f), primes);
    ++checked;
    bool ok = rep.status == BisectionReport::Status::ok && std::fabs(rep.estimate - to_real(alpha.value)) <= 0.05L;
    if (!ok) {
      ++failed;
      if (witness.empty())
        witness = family_text(f) + " formula " + alpha.to_string() + " bisection " + std::to_string((double)rep.estimate);
    }
  }
  std::string detail = std::to_string(checked) + " random families, " + std::to_string(failed) + " outside 0.05";
  if (!witness.empty()) detail += ", first " + witness;
  return {failed == 0, detail};
}

// 7: archimedean abscissae r / |Phi+|
Outcome archimedean() {
  std::vector<std::pair<std::string, Rational>> want = {
      {"A1", Rational(1)}, {"A2", Rational(2, 3)}, {"B2", Rational(1, 2)}, {"G2", Rational(1, 3)}};
  std::string detail;
  bool ok = true;
  for (const auto& [name, q] : want) {
    auto rs = RootSystem::parse(name);
    Rational got = archimedean_abscissa(rs.rank(), rs.positive_roots());
    ok = ok && got == q;
    detail += (detail.empty() ? "" : ", ") + name + " " + to_string(got);
  }
  return {ok, detail};
}

// 8: Artin densities over primes below 10^6
Outcome artin() {
  auto t0 = Clock::now();
  auto sq = artin_density({ArtinFormula::atom({1, 0, 1}), {}, {}}, 1'000'000);
  auto cube = artin_density({ArtinFormula::atom({-2, 0, 0, 1}), {}, {}}, 1'000'000);
  double t = seconds_since(t0);
  bool ok = std::fabs(sq.density - 0.5L) <= 0.02L && std::fabs(cube.density - 1.0L / 3) <= 0.02L && t < 120;
  char buf[160];
  std::snprintf(buf, sizeof buf, "x^2+1 %.4f, x^3-2 %.4f over %llu primes, %s (limit 120 s)", (double)sq.density,
                (double)cube.density, (unsigned long long)sq.primes, fmt_seconds(t).c_str());
  return {ok, buf};
}

// 9: Lang-Weil fits at every prime up to 200
Outcome langweil() {
  cli::Options opt;
  opt.prime_bound = 200;
  auto r = cli::verify_langweil(opt);
  return {r.pass(), suite_detail(r)};
}

// 10: SL2 degree families per residue class mod 4
Outcome degree_fit() {
  auto gens = sl2_standard_generators();
  auto one = reductive_degree_fit(gens, {1, 4}, {5, 13}, 17);
  auto three = reductive_degree_fit(gens, {3, 4}, {7, 11}, 19);
  std::string detail = "1 mod 4 fit {5,13} verify 17: " + std::string(one.verified ? "ok" : one.refutation) +
                       " (" + std::to_string(one.families.size()) + " families); 3 mod 4 fit {7,11} verify 19: " +
                       (three.verified ? "ok" : three.refutation) + " (" + std::to_string(three.families.size()) +
                       " families)";
  return {one.verified && three.verified, detail};
}

}  // namespace

int main() {
  default_threads() = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"orbit method equivalence", orbit_method},
      {"Clifford identities", clifford},
      {"decomposition trees", trees},
      {"BCH fuzz", bch_fuzz},
      {"cone pipeline", cone_pipeline},
      {"abscissa formula vs bisection", abscissa_bisection},
      {"archimedean abscissae", archimedean},
      {"Artin densities", artin},
      {"Lang-Weil fits", langweil},
      {"reductive degree fit", degree_fit},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << " ["
              << fmt_seconds(seconds_since(t0)) << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
