#pragma once

#include <cstdint>

#include "repzeta/arith/arith.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta::cli {

/// Global knobs shared by every command. Zero means "use the command's default".
struct Options {
  u64 budget = 0;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  u64 prime_bound = 0;
  unsigned fuzz_pairs = 1000;
  std::size_t index_bound_order = 200;  // catalog groups up to this order get the index-bound sweep

  std::size_t group_cap() const { return budget ? static_cast<std::size_t>(budget) : kDefaultGroupCap; }
  u64 count_budget() const { return budget ? budget : kDefaultCountBudget; }
};

}  // namespace repzeta::cli
