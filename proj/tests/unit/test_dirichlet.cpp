#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "repzeta/dirichlet/abscissa.hpp"
#include "repzeta/dirichlet/series.hpp"

using namespace repzeta;

namespace {

DirichletPoly poly(std::initializer_list<std::pair<int, Rational>> t) {
  DirichletPoly z;
  for (auto& [n, c] : t) z.add(n, c);
  return z;
}

std::vector<u64> odd_class_primes(u64 bound) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(bound))
    if (p % 4 == 3) out.push_back(p);
  return out;
}

}  // namespace

TEST(DirichletEval, Examples) {
  EXPECT_EQ(eval_dirichlet(poly({{1, 1}}), 2), 1.0L);
  EXPECT_EQ(eval_dirichlet(poly({{1, 2}, {2, 1}}), 0), 3.0L);
  EXPECT_EQ(eval_dirichlet(poly({{1, 2}, {2, 1}}), 1), 2.5L);
  EXPECT_EQ(poly({{1, 2}, {2, 1}}).eval_exact(1), Rational(5, 2));
}

TEST(DirichletEval, RejectsBadTerms) {
  DirichletPoly z;
  EXPECT_THROW(z.add(0, 1), InputError);
  EXPECT_THROW(z.add(2, -1), InputError);
}

TEST(DirichletEval, MonotoneDecreasingInS) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    DirichletPoly z;
    int terms = 1 + rng() % 6;
    for (int i = 0; i < terms; ++i) z.add(1 + rng() % 40, Rational(1 + rng() % 9, 1 + rng() % 5));
    Rational s1(static_cast<long long>(rng() % 7) - 3, 1 + rng() % 3);
    Rational s2 = s1 + Rational(1 + rng() % 5, 1 + rng() % 4);
    EXPECT_GE(eval_dirichlet(z, s1), eval_dirichlet(z, s2));
  }
}

TEST(AbscissaFromCounts, Examples) {
  std::vector<BigInt> r(10, 0);
  r[0] = 1;
  EXPECT_NEAR(abscissa_from_counts(r), 0.0, 1e-15);
  EXPECT_NEAR(abscissa_from_counts(std::vector<BigInt>(100, 1)), 1.0, 1e-15);
  std::vector<BigInt> lin;
  for (int n = 1; n <= 1000; ++n) lin.push_back(n);
  EXPECT_NEAR(abscissa_from_counts(lin), std::log(1000.0 * 1001 / 2) / std::log(1000.0), 1e-12);
  EXPECT_THROW(abscissa_from_counts(std::vector<BigInt>(5, 0)), InputError);
  EXPECT_THROW(abscissa_from_counts({BigInt(1)}), InputError);
}

TEST(Jaikin, Examples) {
  JaikinLocalFactor geo{{JaikinTerm{1, {0, 1}, {{1, 0}}}}};
  EXPECT_NEAR(jaikin_eval(geo, 5, 1), 0.25, 1e-15);
  EXPECT_EQ(jaikin_eval_exact(geo, 5, 1), Rational(1, 4));
  JaikinLocalFactor constant{{JaikinTerm{1, {1}, {}}}};
  for (int p : {2, 3, 7})
    for (Rational s : {Rational(1), Rational(5, 2), Rational(-1)}) EXPECT_EQ(jaikin_eval(constant, p, s), 1.0L);
  JaikinLocalFactor pole{{JaikinTerm{1, {1}, {{1, 1}}}}};
  try {
    jaikin_eval(pole, 5, 1);
    FAIL() << "expected a pole";
  } catch (const PoleError& e) {
    EXPECT_EQ(e.A, 1);
    EXPECT_EQ(e.B, 1);
  }
}

// Oracle: expand each 1/(1 - x) as sum_{k<=40} x^k and sum the Dirichlet series directly.
TEST(Jaikin, AgreesWithTruncatedExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    JaikinLocalFactor f;
    int nterms = 1 + rng() % 3;
    for (int i = 0; i < nterms; ++i) {
      JaikinTerm t;
      t.n = 1 + rng() % 6;
      int deg = rng() % 3;
      for (int d = 0; d <= deg; ++d) t.f.push_back(rng() % 4);
      int npairs = rng() % 3;
      for (int j = 0; j < npairs; ++j) {
        long long a = 1 + rng() % 3;
        t.pairs.emplace_back(a, rng() % a);
      }
      f.terms.push_back(t);
    }
    for (long long p : {2, 3, 5, 7, 11, 13}) {
      for (long long s : {1, 2, 3}) {
        bool slow = false;
        for (auto& t : f.terms)
          for (auto [a, b] : t.pairs) slow |= (p == 2 && a * s - b == 1);
        if (slow) continue;  // ratio 1/2: 40 terms leave a 1e-12 tail, below the digit target
        Rational expected = 0, x = rational_pow(Rational(p), -s);
        for (auto& t : f.terms) {
          Rational fx = 0, xi = 1;
          for (auto& c : t.f) {
            fx += Rational(c) * xi;
            xi *= x;
          }
          Rational term = rational_pow(Rational(t.n), -s) * fx;
          for (auto [a, b] : t.pairs) {
            Rational r = rational_pow(Rational(p), -a * s + b), geo = 0, rk = 1;
            for (int k = 0; k <= 40; ++k) {
              geo += rk;
              rk *= r;
            }
            term *= geo;
          }
          expected += term;
        }
        long double got = jaikin_eval(f, p, s), want = to_real(expected);
        if (want == 0) {
          EXPECT_EQ(got, 0);
        } else {
          EXPECT_LT(std::fabs(got - want) / want, 1e-12L) << "p=" << p << " s=" << s;
        }
      }
    }
  }
}

TEST(Equivalence, Examples) {
  std::vector<DirichletPoly> a{poly({{1, 1}, {3, 2}}), poly({{2, Rational(1, 3)}})};
  EXPECT_TRUE(check_equivalence(a, a, 1, {0, 1, Rational(5, 2)}).equivalent);
  std::vector<DirichletPoly> b2;
  for (auto& z : a) b2.push_back(z.scaled(2));
  EXPECT_TRUE(check_equivalence(b2, a, 2, {0, 1, 2}).equivalent);
  EXPECT_THROW(check_equivalence(a, a, 1, {}), InputError);
}

TEST(Equivalence, PrimePowerRatioFailsWithWitness) {
  auto primes = primes_up_to(200);
  std::vector<std::function<long double(const Rational&)>> fa, fb;
  for (u64 p : primes) {
    fb.push_back([](const Rational& s) { return 1 + std::pow(2.0L, -to_real(s)); });
    fa.push_back([p](const Rational& s) {
      return std::pow(static_cast<long double>(p), to_real(s)) * (1 + std::pow(2.0L, -to_real(s)));
    });
  }
  Rational C = 10;
  std::vector<Rational> grid{0, 1, 2};
  auto report = check_equivalence(fa, fb, C, grid);
  ASSERT_FALSE(report.equivalent);
  // Independent witness: first grid point and index with p_n^s > C^{1+s}.
  std::size_t want_index = 0;
  Rational want_s = -1;
  for (auto& s : grid) {
    long long k = static_cast<long long>(to_real(s));
    for (std::size_t n = 0; n < primes.size(); ++n) {
      if (BigInt(primes[n]) > 0 && rational_pow(Rational(primes[n]), k) > rational_pow(C, 1 + k)) {
        want_index = n;
        want_s = s;
        break;
      }
    }
    if (want_s >= 0) break;
  }
  EXPECT_EQ(*report.witness_index, want_index);
  EXPECT_EQ(*report.witness_s, want_s);
  EXPECT_EQ(primes[want_index], 101u);
}

TEST(Equivalence, ReflexiveAndSymmetric) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<DirichletPoly> a, b;
    for (int n = 0; n < 3; ++n) {
      DirichletPoly x, y;
      for (int i = 0; i < 3; ++i) {
        x.add(1 + rng() % 5, Rational(1 + rng() % 7, 1 + rng() % 3));
        y.add(1 + rng() % 5, Rational(1 + rng() % 7, 1 + rng() % 3));
      }
      a.push_back(x);
      b.push_back(y);
    }
    Rational C(1 + rng() % 8, 1 + rng() % 2);
    if (C < 1) C = 1 / C;
    std::vector<Rational> grid{0, Rational(1, 2), 1, 3};
    EXPECT_TRUE(check_equivalence(a, a, 1, grid).equivalent);
    EXPECT_EQ(check_equivalence(a, b, C, grid).equivalent, check_equivalence(b, a, C, grid).equivalent);
  }
}

TEST(MonomialAbscissa, Examples) {
  EXPECT_EQ(monomial_family_abscissa({{MonomialTerm{1, 2, {}}}}), Abscissa::of(1));
  EXPECT_EQ(monomial_family_abscissa({{MonomialTerm{0, 1, {{2, 1}}}}}), Abscissa::of(Rational(2, 3)));
  EXPECT_EQ(monomial_family_abscissa({{MonomialTerm{0, 1, {}}}}), Abscissa::of(1));
  EXPECT_EQ(monomial_family_abscissa({}), Abscissa::minus_infinity());
}

TEST(MonomialAbscissa, PoleTermDominates) {
  // (d,e)=(0,1), pair (1,3): max{(3+1)/2, 3} = 3
  EXPECT_EQ(monomial_family_abscissa({{MonomialTerm{0, 1, {{1, 3}}}}}), Abscissa::of(3));
}

TEST(MonomialAbscissa, RejectsInvalidFamilies) {
  EXPECT_THROW(monomial_family_abscissa({{MonomialTerm{0, 1, {{0, 1}}}}}), InvalidFamilyError);
  EXPECT_THROW(monomial_family_abscissa({{MonomialTerm{1, 0, {}}}}), InvalidFamilyError);
  EXPECT_THROW(monomial_family_abscissa({{MonomialTerm{1, 0, {{0, 0}}}}}), InvalidFamilyError);
  EXPECT_EQ(monomial_family_abscissa({{MonomialTerm{0, 1, {{0, 0}}}}}), Abscissa::of(1));
}

TEST(Archimedean, Examples) {
  EXPECT_EQ(archimedean_abscissa(1, 1), 1);
  EXPECT_EQ(archimedean_abscissa(2, 3), Rational(2, 3));
  EXPECT_EQ(archimedean_abscissa(2, 6), Rational(1, 3));
  auto g2 = RootSystem::parse("G2");
  EXPECT_EQ(archimedean_abscissa(g2.rank(), g2.positive_roots()), Rational(1, 3));
  auto b2 = RootSystem::parse("B2");
  EXPECT_EQ(archimedean_abscissa(b2.rank(), b2.positive_roots()), Rational(1, 2));
  EXPECT_EQ(RootSystem::parse("E8").positive_roots(), 120u);
  EXPECT_THROW(RootSystem::parse("G3"), InputError);
}

TEST(EulerAbscissa, Examples) {
  EulerProductSpec a1;
  a1.archimedean = {{1, 1}};
  EXPECT_EQ(euler_abscissa(a1), Abscissa::of(1));

  EulerProductSpec halves;
  halves.parts.push_back({"p=1 mod 4", false, {}, {{MonomialTerm{0, 1, {{2, 1}}}}}, {}});
  halves.parts.push_back({"p=3 mod 4", false, {}, {{MonomialTerm{0, 1, {}}}}, {}});
  EXPECT_EQ(euler_abscissa(halves), Abscissa::of(1));

  EulerProductSpec mixed;
  mixed.archimedean = {{1, 1}};
  mixed.parts.push_back({"all", false, {}, {{MonomialTerm{0, 1, {{2, 1}}}}}, {}});
  EXPECT_EQ(euler_abscissa(mixed), Abscissa::of(1));

  EulerProductSpec finite;
  finite.parts.push_back({"{2}", true, {2}, {{MonomialTerm{5, 1, {{2, 1}}}}}, {}});
  EXPECT_EQ(euler_abscissa(finite), Abscissa::of(Rational(1, 2)));
}

TEST(EulerAbscissa, DisjointnessCheck) {
  EulerProductSpec spec;
  spec.parts.push_back({"1 mod 4", false, {}, {}, [](u64 p) { return p % 4 == 1; }});
  spec.parts.push_back({"3 mod 4", false, {}, {}, [](u64 p) { return p % 4 == 3; }});
  EXPECT_FALSE(check_disjoint(spec, 1000).has_value());
  spec.parts.push_back({"{5}", true, {5}, {}, {}});
  EXPECT_EQ(check_disjoint(spec, 1000), std::optional<u64>(5));
}

// Cross-check of the formula against the truncated-product bisection oracle.
TEST(Bisection, MatchesFormulaOnSpecFamilies) {
  auto all = primes_up_to(1'000'000);
  auto half = odd_class_primes(1'000'000);
  for (const auto* primes : {&all, &half}) {
    for (auto family : {MonomialLocalFamily{{MonomialTerm{1, 2, {}}}}, MonomialLocalFamily{{MonomialTerm{0, 1, {{2, 1}}}}},
                        MonomialLocalFamily{{MonomialTerm{0, 1, {}}}}}) {
      auto alpha = monomial_family_abscissa(family);
      auto r = bisect_abscissa(monomial_local_term(family), *primes);
      ASSERT_EQ(r.status, BisectionReport::Status::ok);
      EXPECT_NEAR(r.estimate, to_real(alpha.value), 0.05);
    }
  }
}

TEST(Bisection, EmptyProductIsMinusInfinity) {
  auto r = bisect_abscissa([](u64, long double) { return std::optional<long double>(0); }, primes_up_to(10000));
  EXPECT_EQ(r.status, BisectionReport::Status::neg_infinity);
}

TEST(EquivalentProducts, Examples) {
  auto primes = primes_up_to(1'000'000);
  LocalTerm b = [](u64 p, long double s) { return std::optional<long double>(std::pow((long double)p, -s)); };
  LocalTerm a2 = [](u64 p, long double s) { return std::optional<long double>(2 * std::pow((long double)p, -s)); };
  auto same = equiv_products_same_abscissa(b, b, 1, primes);
  EXPECT_TRUE(same.agree);
  EXPECT_NEAR(same.a.estimate, 1.0, 0.05);
  auto twice = equiv_products_same_abscissa(a2, b, 2, primes);
  EXPECT_TRUE(twice.equivalent_on_grid);
  EXPECT_TRUE(twice.agree);
  EXPECT_NEAR(twice.a.estimate, 1.0, 0.05);
  EXPECT_NEAR(twice.b.estimate, 1.0, 0.05);
  LocalTerm zero = [](u64, long double) { return std::optional<long double>(0); };
  auto empty = equiv_products_same_abscissa(zero, zero, 1, primes);
  EXPECT_EQ(empty.a.status, BisectionReport::Status::neg_infinity);
  EXPECT_TRUE(empty.agree);
}

// Multiplying every local factor by a constant in [1/C, C] leaves the abscissa unchanged.
TEST(Bisection, InvariantUnderBoundedPerturbation) {
  auto primes = odd_class_primes(1'000'000);
  MonomialLocalFamily family{{MonomialTerm{1, 3, {{1, 0}}}}};
  auto base = monomial_local_term(family);
  for (long double c : {0.25L, 0.5L, 3.0L}) {
    LocalTerm scaled = [&, c](u64 p, long double s) -> std::optional<long double> {
      auto v = base(p, s);
      if (!v) return std::nullopt;
      return c * *v;
    };
    auto r = equiv_products_same_abscissa(scaled, base, 4, primes);
    EXPECT_TRUE(r.agree) << c;
  }
}

// Doubling the prime bound: stable above the abscissa, growing below it.
TEST(Bisection, DoublingConsistency) {
  auto primes = odd_class_primes(1'000'000);
  for (auto family : {MonomialLocalFamily{{MonomialTerm{1, 2, {}}}}, MonomialLocalFamily{{MonomialTerm{0, 1, {{2, 1}}}}}}) {
    auto alpha = to_real(monomial_family_abscissa(family).value);
    auto rep = doubling_check(monomial_local_term(family), primes, alpha, 1'000'000);
    EXPECT_TRUE(rep.stable_above) << rep.growth_above;
    EXPECT_TRUE(rep.grows_below) << rep.growth_below;
  }
}
