#pragma once

#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/groupcore/group.hpp"
#include "repzeta/liering/matrix.hpp"

namespace repzeta {

struct NoriLieAlgebra {
  std::vector<ModMatrix> basis;  // reduced echelon basis of the span
  std::size_t group_order = 0;
  std::size_t order_p_elements = 0;
  std::size_t dimension() const { return basis.size(); }
};

/// F_p-span of log(g) over the elements of order p in the group generated by gens (matrices
/// over F_p). Asserts that the span is closed under commutators.
inline NoriLieAlgebra nori_lie(const std::vector<ModMatrix>& gens, std::size_t cap = 100000) {
  require(!gens.empty(), "need at least one generator");
  const auto& g0 = gens[0];
  require(g0.k == 1, "Nori's construction works over F_p");
  if (g0.p <= 2 * u64(g0.n)) throw DomainError("nori_lie needs p > 2n");
  std::vector<Key> keys;
  for (const auto& g : gens) {
    require(g.same_shape(g0), "generators disagree on shape");
    ModMatrix pw = ModMatrix::identity(g.n, g.p, 1);
    for (u64 i = 0; i < g.p; ++i) pw = pw * g;
    require(pw == ModMatrix::identity(g.n, g.p, 1), "generator does not have order dividing p");
    keys.push_back(g.a);
  }
  auto grp = group_from_generators(keys, static_cast<i64>(g0.p), cap, "nori");
  NoriLieAlgebra out;
  out.group_order = grp.order();
  std::vector<std::vector<i64>> rows;
  for (std::size_t x = 0; x < grp.order(); ++x) {
    if (x == grp.identity() || grp.element_order(x) != g0.p) continue;
    ++out.order_p_elements;
    ModMatrix m(g0.n, g0.p, 1);
    m.a = grp.key(x);
    rows.push_back(log_unipotent(m).a);
    if (rows.size() > 4 * std::size_t(g0.n) * g0.n) detail::rref_mod_p(rows, static_cast<i64>(g0.p));
  }
  detail::rref_mod_p(rows, static_cast<i64>(g0.p));
  for (const auto& r : rows) {
    ModMatrix m(g0.n, g0.p, 1);
    m.a = r;
    out.basis.push_back(m);
  }
  for (const auto& a : out.basis)
    for (const auto& b : out.basis)
      ensure(detail::in_span_mod_p(rows, commutator(a, b).a, static_cast<i64>(g0.p)),
             "span of logs is not closed under commutators");
  return out;
}

}  // namespace repzeta
