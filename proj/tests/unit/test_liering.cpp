#include <gtest/gtest.h>

#include <random>

#include "repzeta/groupcore/catalog.hpp"
#include "repzeta/groupcore/clifford.hpp"
#include "repzeta/liering/bch.hpp"
#include "repzeta/liering/nori.hpp"
#include "repzeta/liering/ring.hpp"

using namespace repzeta;

namespace {

ModMatrix random_matrix(unsigned n, u64 p, unsigned k, std::mt19937_64& rng) {
  ModMatrix m(n, p, k);
  std::uniform_int_distribution<i64> d(0, m.q - 1);
  for (auto& v : m.a) v = d(rng);
  return m;
}

ModMatrix random_upper(unsigned n, u64 p, unsigned k, std::mt19937_64& rng) {
  ModMatrix m = random_matrix(n, p, k, rng);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j <= i; ++j) m(i, j) = 0;
  return m;
}

// random unit lower times unit upper: invertible with an explicit inverse
std::pair<ModMatrix, ModMatrix> random_conjugator(unsigned n, u64 p, unsigned k, std::mt19937_64& rng) {
  auto up = random_upper(n, p, k, rng);
  ModMatrix lo(n, p, k);
  auto t = random_upper(n, p, k, rng);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) lo(i, j) = t(j, i);
  auto id = ModMatrix::identity(n, p, k);
  ModMatrix u = id + up, l = id + lo;
  // (I+N)^-1 = sum (-N)^j
  auto inv_unipotent = [&](const ModMatrix& nil) {
    ModMatrix out = id, term = id;
    for (unsigned j = 1; j < n; ++j) {
      term = term * nil.scaled(-1);
      out = out + term;
    }
    return out;
  };
  return {l * u, inv_unipotent(up) * inv_unipotent(lo)};
}

// nilpotent matrices in a common conjugate of the strictly upper triangular algebra
std::pair<ModMatrix, ModMatrix> random_pair(unsigned n, u64 p, unsigned k, std::mt19937_64& rng) {
  auto [c, ci] = random_conjugator(n, p, k, rng);
  return {c * random_upper(n, p, k, rng) * ci, c * random_upper(n, p, k, rng) * ci};
}

}  // namespace

TEST(ExpLog, Examples) {
  auto z = ModMatrix(3, 7, 1);
  EXPECT_EQ(exp_nilpotent(z), ModMatrix::identity(3, 7, 1));
  auto e12 = ModMatrix::unit(3, 7, 1, 0, 1);
  EXPECT_EQ(exp_nilpotent(e12), ModMatrix::identity(3, 7, 1) + e12);
  auto a = e12 + ModMatrix::unit(3, 7, 1, 1, 2);
  EXPECT_EQ(exp_nilpotent(a), ModMatrix::identity(3, 7, 1) + a + ModMatrix::unit(3, 7, 1, 0, 2, 4));
  EXPECT_EQ(log_unipotent(ModMatrix::identity(3, 7, 1)), z);
  auto g = ModMatrix::identity(3, 7, 1) + e12 + ModMatrix::unit(3, 7, 1, 0, 2);
  EXPECT_EQ(log_unipotent(g), e12 + ModMatrix::unit(3, 7, 1, 0, 2));
}

TEST(ExpLog, EnvelopeErrors) {
  auto a = ModMatrix::unit(3, 5, 1, 0, 1);
  EXPECT_THROW(exp_nilpotent(a), DomainError);
  EXPECT_THROW(log_unipotent(ModMatrix::identity(3, 5, 1)), DomainError);
  EXPECT_NO_THROW(exp_nilpotent(a, Envelope::truncation));
  EXPECT_THROW(exp_nilpotent(ModMatrix::unit(3, 2, 1, 0, 1), Envelope::truncation), DomainError);
  EXPECT_THROW(exp_nilpotent(ModMatrix::identity(2, 7, 1)), InputError);
}

TEST(ExpLog, InverseLawsOnFuzzCorpus) {
  std::mt19937_64 rng(11);
  struct Config {
    unsigned n;
    u64 p;
    unsigned k;
  };
  std::vector<Config> configs;
  for (unsigned n = 1; n <= 4; ++n)
    for (u64 p : {5ull, 7ull, 11ull, 13ull})
      for (unsigned k = 1; k <= 3; ++k)
        if (p > 2 * n) configs.push_back({n, p, k});
  for (auto c : configs)
    for (int t = 0; t < 1000; ++t) {
      auto a = random_pair(c.n, c.p, c.k, rng).first;
      auto g = exp_nilpotent(a);
      ASSERT_EQ(log_unipotent(g), a) << c.n << " " << c.p << " " << c.k;
      ASSERT_EQ(exp_nilpotent(log_unipotent(g)), g);
    }
}

TEST(Bch, Words) {
  // X + Y + 1/2 [X,Y] + 1/12 [X,[X,Y]] - 1/12 [Y,[X,Y]]
  std::map<std::string, Rational> want = {{"X", 1}, {"Y", 1}, {"XY", Rational(1, 2)}, {"XXY", Rational(1, 12)},
                                          {"YXY", Rational(-1, 12)}};
  std::map<std::string, Rational> got;
  for (const auto& w : bch_words(3)) got[w.letters] = w.coef;
  EXPECT_EQ(got, want);
  // degree 4 is -1/24 [Y,[X,[X,Y]]]; [X,[Y,[X,Y]]] is the same bracket by Jacobi
  Rational four = 0;
  for (const auto& w : bch_words(4))
    if (w.letters.size() == 4) {
      EXPECT_TRUE(w.letters == "YXXY" || w.letters == "XYXY") << w.letters;
      four += w.coef;
    }
  EXPECT_EQ(four, Rational(-1, 24));
}

TEST(Bch, Examples) {
  std::mt19937_64 rng(5);
  auto [a, b] = random_pair(3, 7, 1, rng);
  EXPECT_EQ(bch(a, ModMatrix(3, 7, 1), 2), a);
  // class two: the Heisenberg pair
  auto x = ModMatrix::unit(3, 7, 1, 0, 1, 3), y = ModMatrix::unit(3, 7, 1, 1, 2, 5);
  EXPECT_EQ(bch(x, y, 2), x + y + commutator(x, y).scaled(4));
  // class three, 4 x 4 over Z/7
  auto [c, d] = random_pair(4, 7, 1, rng);
  auto oracle = log_unipotent(exp_nilpotent(c, Envelope::truncation) * exp_nilpotent(d, Envelope::truncation),
                              Envelope::truncation);
  EXPECT_EQ(bch(c, d, 3), oracle);
  EXPECT_THROW(bch(c, d, 7), DomainError);
}

TEST(Bch, AgreesWithExpLogOnFuzzPairs) {
  std::mt19937_64 rng(2024);
  for (unsigned n = 2; n <= 4; ++n)
    for (u64 p : {7ull, 11ull})
      for (unsigned k = 1; k <= 2; ++k) {
        int failures = 0;
        for (int t = 0; t < 1000; ++t) {
          auto [a, b] = random_pair(n, p, k, rng);
          auto lhs = bch(a, b, n - 1);
          auto rhs = log_unipotent(exp_nilpotent(a, Envelope::truncation) * exp_nilpotent(b, Envelope::truncation),
                                   Envelope::truncation);
          failures += !(lhs == rhs);
        }
        EXPECT_EQ(failures, 0) << "n=" << n << " p=" << p << " k=" << k;
      }
}

TEST(LieRing, StructureFromMatrices) {
  EXPECT_FALSE(heisenberg_ring(5).warnings().empty());  // 3 x 3 needs p > 6
  auto h = heisenberg_ring(7);
  EXPECT_EQ(h.rank(), 3u);
  EXPECT_EQ(h.nilpotency_class(), 2u);
  EXPECT_EQ(h.constant(0, 1, 2), 1);
  EXPECT_EQ(h.constant(1, 0, 2), 6);
  EXPECT_TRUE(h.warnings().empty());
  auto u = upper_triangular_ring(4, 7);
  EXPECT_EQ(u.rank(), 6u);
  EXPECT_EQ(u.nilpotency_class(), 3u);
  EXPECT_FALSE(u.warnings().empty());  // 4 x 4 over F_7 sits outside p > 2n
  for (unsigned i = 0; i < 6; ++i)
    for (unsigned j = 0; j < 6; ++j) {
      auto br = u.bracket(u.basis_vector(i), u.basis_vector(j));
      EXPECT_EQ(u.to_matrix(br), commutator(u.matrix_basis()[i], u.matrix_basis()[j]));
    }
  EXPECT_EQ(sl2_congruence_ring(5).nilpotency_class(), 1u);
  EXPECT_EQ(sl2_congruence_ring(5, 3).nilpotency_class(), 2u);
}

TEST(LieRing, Rejections) {
  EXPECT_THROW(NilpotentLieRing::from_structure(5, 1, 2, {{0, 0, 1, 1}}), InputError);
  // [e0,e1] = e0 is not nilpotent
  EXPECT_THROW(NilpotentLieRing::from_structure(5, 1, 2, {{0, 1, 0, 1}}), InputError);
  // class 3 over p = 3
  EXPECT_THROW(upper_triangular_ring(4, 3), DomainError);
  // not closed under brackets
  EXPECT_THROW(NilpotentLieRing::from_matrices(7, 1, {ModMatrix::unit(3, 7, 1, 0, 1), ModMatrix::unit(3, 7, 1, 1, 2)}),
               InputError);
}

TEST(LazardGroup, AbelianIsAddition) {
  auto a = abelian_ring(5, 2);
  auto g = group_from_liering(a);
  EXPECT_EQ(g.order(), 25u);
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y) EXPECT_EQ(g.key(g.mul(x, y)), a.add(g.key(x), g.key(y)));
}

TEST(LazardGroup, FullAssociativityUpToOrder729) {
  for (auto ring : {heisenberg_ring(3), heisenberg_ring(3, 2), upper_triangular_ring(3, 5)}) {
    auto g = group_from_liering(ring);
    ASSERT_LE(g.order(), 729u);
    std::size_t n = g.order();
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) {
        std::size_t ab = g.mul(a, b);
        for (std::size_t c = 0; c < n; ++c)
          if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) {
            ok = false;
            break;
          }
      }
    EXPECT_TRUE(ok) << ring.label();
    for (std::size_t a = 0; a < n; ++a) EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
  }
}

TEST(LazardGroup, HeisenbergF3MatchesMatrixGroup) {
  auto ring = heisenberg_ring(3);
  auto g = group_from_liering(ring);
  auto ut = unitriangular_group(3, 3);
  ASSERT_EQ(g.order(), 27u);
  std::vector<std::size_t> phi(27);
  std::vector<bool> hit(27, false);
  for (std::size_t x = 0; x < 27; ++x) {
    auto m = exp_nilpotent(ring.to_matrix(g.key(x)), Envelope::truncation);
    auto idx = ut.index_of(m.a);
    ASSERT_TRUE(idx.has_value());
    phi[x] = *idx;
    EXPECT_FALSE(hit[*idx]);
    hit[*idx] = true;
  }
  for (std::size_t x = 0; x < 27; ++x)
    for (std::size_t y = 0; y < 27; ++y) EXPECT_EQ(phi[g.mul(x, y)], ut.mul(phi[x], phi[y]));
}

TEST(LazardGroup, HeisenbergZ25SampledAgainstMatrices) {
  auto ring = heisenberg_ring(5, 2);
  auto g = group_from_liering(ring);
  EXPECT_EQ(g.order(), 15625u);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> d(0, g.order() - 1);
  for (int t = 0; t < 2000; ++t) {
    std::size_t a = d(rng), b = d(rng), c = d(rng);
    EXPECT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
    auto ea = exp_nilpotent(ring.to_matrix(g.key(a)), Envelope::truncation);
    auto eb = exp_nilpotent(ring.to_matrix(g.key(b)), Envelope::truncation);
    auto eab = exp_nilpotent(ring.to_matrix(g.key(g.mul(a, b))), Envelope::truncation);
    EXPECT_EQ(ea * eb, eab);
  }
}

TEST(LazardGroup, CongruenceRingMatchesKernelZeta) {
  // ker(SL2(Z/125) -> SL2(Z/5)) generated by I + 5X for X in a basis of sl2
  std::vector<Key> gens = {{1, 5, 0, 1}, {1, 0, 5, 1}, {6, 0, 0, 21}};  // 21 = 6^-1 mod 125
  auto kernel = group_from_generators(gens, 125);
  auto lazard = group_from_liering(sl2_congruence_ring(5, 3));
  ASSERT_EQ(kernel.order(), lazard.order());
  EXPECT_EQ(zeta_of_group(kernel), zeta_of_group(lazard));
}

TEST(LazardGroup, CapExceeded) { EXPECT_THROW(group_from_liering(heisenberg_ring(11, 2), 1000), SizeError); }

TEST(Subring, StructureAndEmbedding) {
  auto h = heisenberg_ring(3);
  auto s = make_subring(h, {h.basis_vector(0), h.basis_vector(2)});
  EXPECT_EQ(s.ring->nilpotency_class(), 1u);
  EXPECT_EQ(s.embed({1, 2}), (LieVec{1, 0, 2}));
  EXPECT_THROW(make_subring(h, {h.basis_vector(0), h.basis_vector(1)}), InputError);
}

TEST(Nori, Examples) {
  auto t = ModMatrix::identity(2, 7, 1) + ModMatrix::unit(2, 7, 1, 0, 1);
  auto one = nori_lie({t});
  EXPECT_EQ(one.dimension(), 1u);
  EXPECT_EQ(one.basis[0], ModMatrix::unit(2, 7, 1, 0, 1));

  auto s = ModMatrix::identity(2, 7, 1) + ModMatrix::unit(2, 7, 1, 1, 0);
  auto sl2 = nori_lie({t, s});
  EXPECT_EQ(sl2.group_order, 336u);
  EXPECT_EQ(sl2.dimension(), 3u);

  auto u1 = ModMatrix::identity(3, 7, 1) + ModMatrix::unit(3, 7, 1, 0, 1);
  auto u2 = ModMatrix::identity(3, 7, 1) + ModMatrix::unit(3, 7, 1, 1, 2);
  auto up = nori_lie({u1, u2});
  EXPECT_EQ(up.group_order, 343u);
  EXPECT_EQ(up.dimension(), 3u);

  EXPECT_THROW(nori_lie({ModMatrix::identity(3, 5, 1) + ModMatrix::unit(3, 5, 1, 0, 1)}), DomainError);
  EXPECT_THROW(nori_lie({ModMatrix::from_rows({{2, 0}, {0, 1}}, 7, 1)}), InputError);
}
