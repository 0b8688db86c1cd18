#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <map>

#include "repzeta/groupcore/catalog.hpp"
#include "repzeta/groupcore/chartable.hpp"
#include "repzeta/groupcore/clifford.hpp"
#include "repzeta/groupcore/tree.hpp"

using namespace repzeta;

namespace {

std::vector<u64> sorted_degrees(const CharacterTable& t) {
  auto d = t.degrees;
  std::sort(d.begin(), d.end());
  return d;
}

std::complex<double> value(const CharacterTable& t, std::size_t i, std::size_t k) {
  std::complex<double> z = 0;
  for (const auto& term : t.values[i][k])
    z += double(term.mult) * std::polar(1.0, 2 * M_PI * term.exp / t.exponent);
  return z;
}

}  // namespace

TEST(Groups, GeneratorExamples) {
  EXPECT_EQ(group_from_generators({{0, 1, 1, 0}}, 5).order(), 2u);
  EXPECT_EQ(group_from_generators(sl2_generators(), 3).order(), 24u);
  EXPECT_EQ(group_from_generators(sl2_generators(), 9).order(), 648u);
  EXPECT_THROW(group_from_generators(sl2_generators(), 9, 100), SizeError);
  EXPECT_THROW(group_from_generators({{1, 1, 1, 1}}, 5), InputError);
}

TEST(Groups, CatalogOrders) {
  for (const auto& e : group_catalog()) {
    auto g = e.build();
    EXPECT_EQ(g.order(), e.order) << e.name;
  }
}

TEST(Groups, GroupAxioms) {
  for (const char* name : {"S4", "Q8", "F21", "C3xS3", "UT3(3)"}) {
    auto g = catalog_group(name);
    for (std::size_t a = 0; a < g.order(); ++a) {
      EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
      EXPECT_EQ(g.mul(g.identity(), a), a);
      for (std::size_t b = 0; b < g.order(); b += 3)
        EXPECT_EQ(g.mul(g.mul(a, b), a), g.mul(a, g.mul(b, a)));
    }
  }
}

TEST(Groups, TableRoundTrip) {
  auto g = catalog_group("D8");
  std::vector<std::vector<std::size_t>> tab(g.order(), std::vector<std::size_t>(g.order()));
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) tab[a][b] = g.mul(a, b);
  auto h = group_from_table(tab);
  EXPECT_EQ(h.order(), 8u);
  EXPECT_FALSE(h.is_abelian());
  tab[0][1] = tab[0][2];
  EXPECT_THROW(group_from_table(tab), InputError);
}

TEST(Groups, SubgroupOps) {
  auto g = catalog_group("S4");
  auto whole = whole_group(g);
  auto triv = trivial_subgroup(g);
  EXPECT_TRUE(is_normal_in(whole, triv));
  auto cc = conjugacy_classes(g);
  // Klein four: the identity plus the class of double transpositions
  std::vector<std::size_t> v4 = {g.identity()};
  for (std::size_t x = 0; x < g.order(); ++x)
    if (g.element_order(x) == 2 && cc->sizes[cc->class_of[x]] == 3) v4.push_back(x);
  auto k = make_subgroup(g, v4);
  EXPECT_EQ(k.group.order(), 4u);
  EXPECT_TRUE(is_normal_in(k, whole));
  EXPECT_EQ(index_of_subgroup(whole, k), 6u);
  auto q = quotient_group(whole, k);
  EXPECT_EQ(q.order(), 6u);
  EXPECT_FALSE(q.is_abelian());
  EXPECT_EQ(normalizer(whole, k).elems.size(), 24u);
}

TEST(Classes, ClassEquation) {
  std::map<std::string, std::size_t> expected = {{"S3", 3}, {"D8", 5}, {"Q8", 5}, {"A4", 4}, {"S4", 5},
                                                 {"A5", 5}, {"SL2(3)", 7}, {"GL2(3)", 8}, {"S5", 7}, {"GL3(2)", 6},
                                                 {"UT3(5)", 29}, {"SL2(5)", 9}};
  for (const auto& [name, count] : expected) {
    auto g = catalog_group(name);
    auto cc = conjugacy_classes(g);
    EXPECT_EQ(cc->count(), count) << name;
    std::size_t total = 0;
    for (auto s : cc->sizes) {
      EXPECT_EQ(g.order() % s, 0u);
      total += s;
    }
    EXPECT_EQ(total, g.order());
    EXPECT_EQ(cc->reps[0], g.identity());
  }
}

TEST(CharacterTables, DegreeExamples) {
  EXPECT_EQ(sorted_degrees(character_table(cyclic_group(3))), (std::vector<u64>{1, 1, 1}));
  EXPECT_EQ(sorted_degrees(character_table(catalog_group("S3"))), (std::vector<u64>{1, 1, 2}));
  EXPECT_EQ(sorted_degrees(character_table(catalog_group("SL2(3)"))), (std::vector<u64>{1, 1, 1, 2, 2, 2, 3}));
  std::map<std::string, std::vector<u64>> known = {
      {"Q8", {1, 1, 1, 1, 2}},          {"S4", {1, 1, 2, 3, 3}},
      {"A5", {1, 3, 3, 4, 5}},          {"S5", {1, 1, 4, 4, 5, 5, 6}},
      {"GL3(2)", {1, 3, 3, 6, 7, 8}},   {"SL2(5)", {1, 2, 2, 3, 3, 4, 4, 5, 6}},
      {"GL2(3)", {1, 1, 2, 2, 2, 3, 3, 4}}, {"F20", {1, 1, 1, 1, 4}},
      {"F21", {1, 1, 1, 3, 3}}};
  for (const auto& [name, degs] : known) EXPECT_EQ(sorted_degrees(character_table(catalog_group(name))), degs) << name;
}

TEST(CharacterTables, OrthogonalityAcrossCatalog) {
  for (const auto& e : group_catalog()) {
    auto t = character_table(e.build());
    EXPECT_TRUE(verify_orthogonality(t)) << e.name;
    EXPECT_EQ(t.degrees[t.trivial()], 1u);
    for (std::size_t k = 0; k < t.classes->count(); ++k) EXPECT_NEAR(std::abs(value(t, 0, k) - 1.0), 0.0, 1e-9);
    u64 sum = 0;
    for (auto d : t.degrees) {
      EXPECT_EQ(e.order % d, 0u) << e.name;
      sum += d * d;
    }
    EXPECT_EQ(sum, e.order) << e.name;
  }
}

TEST(CharacterTables, AbelianGroupsHaveLinearCharacters) {
  for (const auto& e : group_catalog()) {
    auto g = e.build();
    if (!g.is_abelian()) continue;
    auto t = character_table(g);
    EXPECT_EQ(t.size(), g.order());
    for (auto d : t.degrees) EXPECT_EQ(d, 1u);
  }
}

TEST(CharacterTables, ValuesMatchComplexSecondOrthogonality) {
  auto t = character_table(catalog_group("GL2(3)"));
  auto n = static_cast<double>(t.group.order());
  for (std::size_t k = 0; k < t.classes->count(); ++k) {
    double col = 0;
    for (std::size_t i = 0; i < t.size(); ++i) col += std::norm(value(t, i, k));
    EXPECT_NEAR(col, n / t.classes->sizes[k], 1e-8);
  }
}

TEST(CharacterTables, RestrictionToSubgroup) {
  auto g = catalog_group("S4");
  auto big = character_table(g);
  // A4 as the even permutations: generated by squares
  std::vector<std::size_t> sq;
  for (std::size_t x = 0; x < g.order(); ++x) sq.push_back(g.mul(x, x));
  std::sort(sq.begin(), sq.end());
  sq.erase(std::unique(sq.begin(), sq.end()), sq.end());
  auto a4 = generated_subgroup(g, sq);
  ASSERT_EQ(a4.group.order(), 12u);
  auto small = character_table(a4.group);
  for (std::size_t i = 0; i < big.size(); ++i) {
    Rational total = 0;
    for (std::size_t j = 0; j < small.size(); ++j) {
      auto m = restriction_multiplicity(big, i, a4, small, j);
      EXPECT_TRUE(is_integer(m));
      total += m * small.degrees[j];
    }
    EXPECT_EQ(total, Rational(big.degrees[i]));
  }
}

TEST(CharacterTables, DeterministicForSeed) {
  auto a = character_table(catalog_group("SL2(5)"));
  auto b = character_table(catalog_group("SL2(5)"));
  EXPECT_EQ(a.degrees, b.degrees);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.classes->count(); ++k)
      EXPECT_EQ(a.canonical(i, k), b.canonical(i, k));
}

namespace {

Subgroup normal_of_order(const Subgroup& h, std::size_t order, bool cyclic = false) {
  for (auto& n : normal_subgroups(h)) {
    if (n.order() != order) continue;
    if (cyclic) {
      bool has_gen = false;
      for (std::size_t x = 0; x < n.order(); ++x) has_gen |= n.group.element_order(x) == order;
      if (!has_gen) continue;
    }
    return n;
  }
  throw std::runtime_error("no such normal subgroup");
}

// a nontrivial character with values +-1
std::size_t order_two_character(const CharacterTable& t) {
  for (std::size_t j = 1; j < t.size(); ++j) {
    if (t.degrees[j] != 1) continue;
    bool real = true;
    for (std::size_t k = 0; k < t.classes->count(); ++k) real &= std::abs(value(t, j, k).imag()) < 1e-9;
    if (real) return j;
  }
  throw std::runtime_error("no order two character");
}

std::size_t first_of_degree(const CharacterTable& t, u64 d) {
  for (std::size_t j = 0; j < t.size(); ++j)
    if (t.degrees[j] == d) return j;
  throw std::runtime_error("no character of that degree");
}

DirichletPoly poly(std::initializer_list<std::pair<int, int>> terms) {
  DirichletPoly z;
  for (auto [n, c] : terms) z.add(n, c);
  return z;
}

}  // namespace

TEST(Zeta, Examples) {
  EXPECT_EQ(zeta_of_group(cyclic_group(1)), poly({{1, 1}}));
  EXPECT_EQ(zeta_of_group(catalog_group("S3")), poly({{1, 2}, {2, 1}}));
  EXPECT_EQ(zeta_of_group(catalog_group("UT3(3)")), poly({{1, 9}, {3, 2}}));
}

TEST(Clifford, IrrOverAndRelativeZeta) {
  auto& cache = default_table_cache();
  auto s3 = whole_group(catalog_group("S3"));
  auto c3 = normal_of_order(s3, 3);
  auto over = irr_over(s3, c3, 1);
  ASSERT_EQ(over.size(), 1u);
  EXPECT_EQ(cache.get(s3)->degrees[over[0]], 2u);
  EXPECT_EQ(relative_zeta(s3, c3, 1), poly({{2, 1}}));
  EXPECT_EQ(relative_zeta(s3, s3, 2), poly({{1, 1}}));
  EXPECT_EQ(irr_over(s3, s3, 2), (std::vector<std::size_t>{2}));

  auto s4 = whole_group(catalog_group("S4"));
  auto v4 = normal_of_order(s4, 4);
  for (std::size_t tau = 1; tau < 4; ++tau) {
    auto o = irr_over(s4, v4, tau);
    ASSERT_EQ(o.size(), 2u);
    for (auto i : o) EXPECT_EQ(cache.get(s4)->degrees[i], 3u);
    EXPECT_EQ(relative_zeta(s4, v4, tau), poly({{3, 2}}));
  }
  auto a4sub = make_subgroup(s4.parent, {s4.parent.identity()});
  EXPECT_THROW(irr_over(a4sub, v4, 1), InputError);
}

TEST(Clifford, SumExamples) {
  auto s3 = whole_group(catalog_group("S3"));
  auto rep = verify_clifford_sum(s3, normal_of_order(s3, 3));
  EXPECT_TRUE(rep);
  EXPECT_EQ(rep.rhs, poly({{1, 2}, {2, 1}}));
  EXPECT_TRUE(verify_clifford_sum(s3, trivial_subgroup(s3.parent)));
  auto q8 = whole_group(catalog_group("Q8"));
  EXPECT_TRUE(verify_clifford_sum(q8, normal_of_order(q8, 4)));
}

TEST(Clifford, StabilizerExamples) {
  auto c4c4 = whole_group(catalog_group("C4xC4"));
  auto k = normal_of_order(c4c4, 4);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(stabilizer_of_char(c4c4, k, t), c4c4);
  auto s3 = whole_group(catalog_group("S3"));
  auto c3 = normal_of_order(s3, 3);
  EXPECT_EQ(stabilizer_of_char(s3, c3, 1), c3);
  auto d8 = whole_group(catalog_group("D8"));
  auto c4 = normal_of_order(d8, 4, true);
  auto tc4 = default_table_cache().get(c4);
  EXPECT_EQ(stabilizer_of_char(d8, c4, order_two_character(*tc4)), d8);
}

TEST(Clifford, MaxNormalPSubgroupExamples) {
  auto s4 = whole_group(catalog_group("S4"));
  EXPECT_EQ(max_normal_p_subgroup(s4, 2).order(), 4u);
  EXPECT_EQ(max_normal_p_subgroup(s4, 5).order(), 1u);
  auto d8 = whole_group(catalog_group("D8"));
  EXPECT_EQ(max_normal_p_subgroup(d8, 2), d8);
  EXPECT_EQ(max_normal_p_subgroup(whole_group(catalog_group("SL2(3)")), 2).order(), 8u);
  EXPECT_EQ(max_normal_p_subgroup(whole_group(catalog_group("A5")), 2).order(), 1u);
}

TEST(Clifford, ExtendibilityExamples) {
  auto d8 = whole_group(catalog_group("D8"));
  auto c4 = normal_of_order(d8, 4, true);
  auto r = extendibility_check(d8, c4, order_two_character(*default_table_cache().get(c4)));
  EXPECT_TRUE(r.extendible);
  EXPECT_TRUE(r.count_match);
  auto same = extendibility_check(d8, d8, 3);
  EXPECT_TRUE(same.extendible);
  EXPECT_TRUE(same.count_match);

  // rho of degree 2 on the normal Q8 in SL2(3): the three characters of degree 2 restrict to it
  auto sl = whole_group(catalog_group("SL2(3)"));
  auto q8 = normal_of_order(sl, 8);
  auto rho = first_of_degree(*default_table_cache().get(q8), 2);
  auto e = extendibility_check(sl, q8, rho);
  EXPECT_TRUE(e.extendible);
  EXPECT_TRUE(e.count_match);

  auto s3 = whole_group(catalog_group("S3"));
  EXPECT_THROW(extendibility_check(s3, normal_of_order(s3, 3), 1), InputError);
}

TEST(Clifford, IndexBoundExamples) {
  auto s4 = whole_group(catalog_group("S4"));
  auto v4 = normal_of_order(s4, 4);
  auto a4 = normal_of_order(s4, 12);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_TRUE(verify_index_bounds(s4, a4, v4, t)) << t;
    EXPECT_TRUE(verify_index_bounds(s4, s4, v4, t)) << t;
  }
  auto s3 = whole_group(catalog_group("S3"));
  auto triv = trivial_subgroup(s3.parent);
  EXPECT_TRUE(verify_index_bounds(s3, normal_of_order(s3, 3), triv, 0));
}

TEST(Trees, Examples) {
  auto ut = whole_group(catalog_group("UT3(3)"));
  for (std::size_t r = 0; r < 11; ++r) {
    auto t = decomposition_tree(ut, ut, r, 3);
    EXPECT_EQ(t.node_count(), 1u);
    EXPECT_EQ(zeta_via_tree(t), poly({{1, 1}}));
  }
  auto s4 = whole_group(catalog_group("S4"));
  auto v4 = normal_of_order(s4, 4);
  auto t = decomposition_tree(s4, v4, 1, 2);
  EXPECT_EQ(t.root->s.order(), 8u);
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_EQ(zeta_via_tree(t), poly({{3, 2}}));
  EXPECT_THROW(decomposition_tree(s4, normal_of_order(s4, 12), 0, 2), InputError);
}

TEST(Trees, CongruenceKernelOfSL2Mod9) {
  auto g = group_from_generators(sl2_generators(), 9);
  auto whole = whole_group(g);
  std::vector<std::size_t> ker;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const auto& m = g.key(x);
    if (m[0] % 3 == 1 && m[1] % 3 == 0 && m[2] % 3 == 0 && m[3] % 3 == 1) ker.push_back(x);
  }
  auto k = make_subgroup(g, ker);
  ASSERT_EQ(k.order(), 27u);
  auto tk = default_table_cache().get(k);
  for (std::size_t r = 0; r < tk->size(); ++r) {
    auto t = decomposition_tree(whole, k, r, 3);
    EXPECT_EQ(zeta_via_tree(t), relative_zeta(whole, k, r)) << r;
  }
}

// Catalog-wide properties

TEST(CatalogProperties, CliffordSumForEveryNormalSubgroup) {
  std::size_t pairs = 0;
  for (const auto& e : group_catalog()) {
    auto h = whole_group(e.build());
    for (const auto& k : normal_subgroups(h)) {
      auto rep = verify_clifford_sum(h, k);
      EXPECT_TRUE(rep) << e.name << " K of order " << k.order();
      ++pairs;
    }
    default_table_cache().clear();
  }
  EXPECT_GT(pairs, 300u);
}

TEST(CatalogProperties, MaxNormalPSubgroupContainsEveryNormalPSubgroup) {
  for (const auto& e : group_catalog()) {
    auto h = whole_group(e.build());
    auto normals = normal_subgroups(h);
    for (auto p : prime_factors(e.order)) {
      auto op = max_normal_p_subgroup(h, p);
      EXPECT_TRUE(is_normal_in(op, h));
      EXPECT_TRUE(is_p_group_order(op.order(), p));
      for (const auto& n : normals)
        if (is_p_group_order(n.order(), p)) EXPECT_TRUE(op.contains(n)) << e.name << " p=" << p;
    }
  }
}

TEST(CatalogProperties, TreesMatchRelativeZeta) {
  std::size_t checked = 0;
  for (const auto& e : group_catalog()) {
    auto h = whole_group(e.build());
    for (const auto& k : normal_subgroups(h))
      for (auto p : prime_factors(e.order)) {
        if (!is_p_group_order(k.order(), p)) continue;
        auto tk = default_table_cache().get(k);
        for (std::size_t r = 0; r < tk->size(); ++r) {
          auto t = decomposition_tree(h, k, r, p);
          EXPECT_EQ(zeta_via_tree(t), relative_zeta(h, k, r)) << e.name << " |K|=" << k.order() << " rho=" << r;
          ++checked;
        }
        if (k.order() == 1) break;
      }
    default_table_cache().clear();
  }
  EXPECT_GT(checked, 500u);
}

TEST(CatalogProperties, ExtendibilityMatchesIsaacsBijection) {
  for (const auto& e : group_catalog()) {
    auto s = whole_group(e.build());
    for (const auto& v : normal_subgroups(s)) {
      auto tv = default_table_cache().get(v);
      for (std::size_t r = 0; r < tv->size(); ++r) {
        if (!(stabilizer_of_char(s, v, r) == s)) continue;
        auto rep = extendibility_check(s, v, r);
        if (rep.extendible) EXPECT_TRUE(rep.count_match) << e.name << " |V|=" << v.order() << " rho=" << r;
      }
    }
    default_table_cache().clear();
  }
}

TEST(CatalogProperties, IndexBoundsForSmallIndexTriples) {
  std::size_t triples = 0;
  for (const auto& e : group_catalog()) {
    if (e.order > 72) continue;  // the larger groups run in the acceptance binary
    auto l = whole_group(e.build());
    for (const auto& k : normal_subgroups(l)) {
      auto tk = default_table_cache().get(k);
      for (const auto& h : overgroups_of_small_index(l, k, 6))
        for (std::size_t t = 0; t < tk->size(); ++t) {
          EXPECT_TRUE(verify_index_bounds(l, h, k, t)) << e.name;
          ++triples;
        }
    }
    default_table_cache().clear();
  }
  EXPECT_GT(triples, 1000u);
}
