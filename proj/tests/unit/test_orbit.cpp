#include <gtest/gtest.h>

#include <random>

#include "repzeta/groupcore/clifford.hpp"
#include "repzeta/orbit/orbit.hpp"

using namespace repzeta;

namespace {

DirichletPoly poly(std::initializer_list<std::pair<int, int>> terms) {
  DirichletPoly z;
  for (auto [n, c] : terms) z.add(BigInt(n), c);
  return z;
}

struct Suite {
  std::string name;
  NilpotentLieRing ring;
};

std::vector<Suite> small_suite() {
  return {{"heisenberg F3", heisenberg_ring(3)},     {"heisenberg F5", heisenberg_ring(5)},
          {"heisenberg F7", heisenberg_ring(7)},     {"heisenberg Z/25", heisenberg_ring(5, 2)},
          {"sl2 congruence 5", sl2_congruence_ring(5)}, {"upper4 F5", upper_triangular_ring(4, 5)},
          {"abelian F5^2", abelian_ring(5, 2)}};
}

// functional restricted to a subring, in subring coordinates
DualCharacter restrict_to(const LieSubring& sub, const DualCharacter& phi) {
  DualCharacter out{LieVec(sub.basis.size())};
  for (std::size_t j = 0; j < sub.basis.size(); ++j) out.theta[j] = pair_dual(*sub.ambient, phi, sub.basis[j]);
  return out;
}

}  // namespace

TEST(Coadjoint, ShiftsCentralDual) {
  auto L = heisenberg_ring(5);
  DualCharacter z{{0, 0, 1}};
  auto moved = coadjoint_action(L, L.basis_vector(0), z);
  EXPECT_EQ(moved.theta, (LieVec{0, 1, 1}));
  EXPECT_EQ(coadjoint_action(L, L.basis_vector(2), z), z);
}

TEST(Coadjoint, RightActionLaw) {
  std::mt19937_64 rng(11);
  for (auto& s : small_suite()) {
    const auto& L = s.ring;
    std::uniform_int_distribution<i64> d(0, L.q() - 1);
    auto rnd = [&] {
      LieVec v(L.rank());
      for (auto& c : v) c = d(rng);
      return v;
    };
    for (int trial = 0; trial < 200; ++trial) {
      auto g = rnd(), h = rnd();
      DualCharacter t{rnd()};
      EXPECT_EQ(coadjoint_action(L, L.bch(g, h), t), coadjoint_action(L, h, coadjoint_action(L, g, t))) << s.name;
      EXPECT_EQ(coadjoint_action(L, L.zero(), t), t);
    }
  }
}

TEST(Coadjoint, HeisenbergF3Census) {
  auto orbits = coadjoint_orbits(heisenberg_ring(3));
  auto census = orbit_census(orbits);
  EXPECT_EQ(census, (std::map<u64, u64>{{1, 9}, {9, 2}}));
  EXPECT_EQ(orbit_zeta(orbits), poly({{1, 9}, {3, 2}}));
}

TEST(Coadjoint, OrbitsPartitionTheDual) {
  for (auto& s : small_suite()) {
    auto orbits = coadjoint_orbits(s.ring);
    u64 total = 0;
    std::vector<bool> hit(s.ring.size(), false);
    for (const auto& o : orbits) {
      total += o.size();
      for (auto m : o.members) {
        EXPECT_FALSE(hit[m]);
        hit[m] = true;
      }
      EXPECT_NO_THROW(o.dimension()) << s.name;
    }
    EXPECT_EQ(total, s.ring.size());
    // sum of dim^2 over irreducibles is the group order
    u64 sq = 0;
    for (const auto& o : orbits) sq += o.size();
    EXPECT_EQ(sq, s.ring.size());
  }
}

TEST(Coadjoint, OrbitOfMatchesPartition) {
  auto L = heisenberg_ring(5, 2);
  auto orbits = coadjoint_orbits(L);
  for (std::size_t i = 0; i < orbits.size(); i += 37) {
    auto o = orbit_of(L, DualCharacter{L.decode(orbits[i].members.back())});
    EXPECT_EQ(o.members, orbits[i].members);
  }
}

TEST(Coadjoint, CapRaises) {
  EXPECT_THROW(coadjoint_orbits(upper_triangular_ring(4, 7), 1000), SizeError);
}

TEST(Kirillov, ZetaMatchesDixon) {
  for (auto& s : small_suite()) {
    auto g = group_from_liering(s.ring);
    EXPECT_EQ(orbit_zeta(s.ring), zeta_of_group(g)) << s.name;
  }
}

TEST(Kirillov, CharacterMatrixMatchesDixon) {
  for (auto& s : small_suite()) {
    auto g = group_from_liering(s.ring);
    auto t = character_table(g);
    auto orbits = coadjoint_orbits(s.ring);
    auto cmp = compare_with_table(s.ring, orbits, t, lazard_class_reps(s.ring, t));
    EXPECT_TRUE(cmp.match) << s.name;
    EXPECT_EQ(cmp.orbits, cmp.classes) << s.name;
  }
}

TEST(Kirillov, TrivialOrbitIsTrivialCharacter) {
  auto L = heisenberg_ring(7);
  auto orbits = coadjoint_orbits(L);
  ASSERT_EQ(orbits[0].members, (std::vector<u64>{0}));
  auto one = kirillov_character(L, orbits[0], LieVec{3, 4, 5});
  EXPECT_EQ(one[0], 1);
  for (std::size_t i = 1; i < one.size(); ++i) EXPECT_EQ(one[i], 0);
}

// restriction_test against containment computed from character tables
TEST(Restriction, AgreesWithCharacterTables) {
  struct Case {
    std::string name;
    NilpotentLieRing ring;
    std::vector<LieVec> basis;
  };
  std::vector<Case> cases = {
      {"heisenberg F5 <Y,Z>", heisenberg_ring(5), {{0, 1, 0}, {0, 0, 1}}},
      {"heisenberg F5 <X>", heisenberg_ring(5), {{1, 0, 0}}},
      {"heisenberg F5 <Z>", heisenberg_ring(5), {{0, 0, 1}}},
      {"heisenberg Z/25 <X+5Y,Z>", heisenberg_ring(5, 2), {{1, 5, 0}, {0, 0, 1}}},
      {"upper4 F5 <E12,E23,E13>", upper_triangular_ring(4, 5), {{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}, {0, 0, 0, 1, 0, 0}}},
  };
  for (auto& c : cases) {
    auto sub = make_subring(c.ring, c.basis);
    const auto& L = c.ring;
    const auto& M = *sub.ring;
    auto g = group_from_liering(L);
    auto tg = character_table(g);
    auto big_orbits = coadjoint_orbits(L);
    auto big_cmp = compare_with_table(L, big_orbits, tg, lazard_class_reps(L, tg));
    ASSERT_TRUE(big_cmp.match) << c.name;

    std::vector<std::size_t> elems;
    for (u64 r = 0; r < M.size(); ++r) elems.push_back(L.encode(sub.embed(M.decode(r))));
    auto s = make_subgroup(g, elems);
    auto ts = character_table(s.group);
    std::vector<LieVec> sub_reps;
    for (auto r : ts.classes->reps) {
      auto local = solve_in_span(L, sub.basis, L.decode(s.to_parent(r)));
      ASSERT_TRUE(local.has_value());
      sub_reps.push_back(*local);
    }
    auto small_orbits = coadjoint_orbits(M);
    auto small_cmp = compare_with_table(M, small_orbits, ts, sub_reps);
    ASSERT_TRUE(small_cmp.match) << c.name;

    std::size_t checked = 0, contained = 0;
    std::size_t step = std::max<std::size_t>(1, big_orbits.size() / 40);
    for (std::size_t i = 0; i < big_orbits.size(); i += step)
      for (std::size_t j = 0; j < small_orbits.size(); ++j) {
        DualCharacter theta{L.decode(big_orbits[i].members[0])};
        DualCharacter tau{M.decode(small_orbits[j].members[0])};
        bool fast = restriction_test(sub, theta, tau);
        auto mult = restriction_multiplicity(tg, big_cmp.row_of_orbit[i], s, ts, small_cmp.row_of_orbit[j]);
        EXPECT_EQ(fast, mult > 0) << c.name << " orbit " << i << " / " << j;
        ++checked;
        contained += fast;
      }
    EXPECT_GT(contained, 0u);
    EXPECT_GT(checked, contained);
  }
}

TEST(Restriction, OrbitMemberRestrictsToItself) {
  auto L = heisenberg_ring(7);
  auto sub = make_subring(L, {{1, 0, 0}, {0, 0, 1}});
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> d(0, 6);
  for (int trial = 0; trial < 100; ++trial) {
    DualCharacter theta{{d(rng), d(rng), d(rng)}};
    auto moved = coadjoint_action(L, LieVec{d(rng), d(rng), d(rng)}, theta);
    EXPECT_TRUE(restriction_test(sub, theta, restrict_to(sub, moved)));
  }
}

TEST(Restriction, RejectsWrongLengths) {
  auto L = heisenberg_ring(5);
  auto sub = make_subring(L, {{0, 0, 1}});
  EXPECT_THROW(restriction_test(sub, DualCharacter{{0, 0}}, DualCharacter{{0}}), InputError);
  EXPECT_THROW(restriction_test(sub, DualCharacter{{0, 0, 1}}, DualCharacter{{0, 1}}), InputError);
}

TEST(Restriction, NonFreeSubringRejected) {
  EXPECT_THROW(make_subring(heisenberg_ring(5, 2), {{5, 0, 0}, {0, 0, 1}}), InputError);
  EXPECT_THROW(make_subring(heisenberg_ring(5), {{1, 0, 0}, {2, 0, 0}}), InputError);
}
