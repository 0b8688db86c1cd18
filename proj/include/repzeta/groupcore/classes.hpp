#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "repzeta/core/modarith.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta {

/// Conjugacy classes. Class 0 holds the identity; the rest are ordered by smallest member,
/// which is also the representative.
struct ConjugacyClasses {
  std::vector<std::size_t> reps;
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> class_of;
  std::vector<std::size_t> inverse_class;
  std::vector<std::size_t> rep_order;
  unsigned exponent = 1;

  std::size_t count() const { return reps.size(); }
};

inline std::shared_ptr<const ConjugacyClasses> conjugacy_classes(const FiniteGroup& g) {
  std::size_t n = g.order();
  const std::uint32_t unset = UINT32_MAX;
  std::vector<std::uint32_t> raw(n, unset);
  std::vector<std::size_t> raw_reps, raw_sizes;
  std::vector<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x) {
    if (raw[x] != unset) continue;
    auto id = static_cast<std::uint32_t>(raw_reps.size());
    raw_reps.push_back(x);
    raw[x] = id;
    queue.assign(1, x);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (auto h : g.gens()) {
        std::size_t y = g.conj(queue[i], h);
        if (raw[y] == unset) {
          raw[y] = id;
          queue.push_back(y);
        }
      }
    }
    raw_sizes.push_back(queue.size());
  }
  // identity class first, others keep ascending representative order
  std::vector<std::size_t> perm(raw_reps.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t id_class = raw[g.identity()];
  std::stable_partition(perm.begin(), perm.end(), [&](std::size_t c) { return c == id_class; });
  std::vector<std::uint32_t> renum(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) renum[perm[i]] = static_cast<std::uint32_t>(i);

  auto cc = std::make_shared<ConjugacyClasses>();
  cc->class_of.resize(n);
  for (std::size_t x = 0; x < n; ++x) cc->class_of[x] = renum[raw[x]];
  for (auto c : perm) {
    cc->reps.push_back(raw_reps[c]);
    cc->sizes.push_back(raw_sizes[c]);
  }
  u64 e = 1;
  for (auto r : cc->reps) {
    std::size_t o = g.element_order(r);
    cc->rep_order.push_back(o);
    e = lcm_u64(e, o);
    cc->inverse_class.push_back(cc->class_of[g.inv(r)]);
  }
  cc->exponent = static_cast<unsigned>(e);
  return cc;
}

}  // namespace repzeta
