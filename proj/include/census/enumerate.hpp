#pragma once

/**
 * Exhaustive generation of all valid preorder degree sequences of a given
 * size whose degrees carry positive weight under a model. Used by the
 * series oracles and by the exact head of the mu estimator.
 */

#include "census/models.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace census {

/**
 * Calls fn(degrees) for every valid tree of exactly n nodes over the
 * model's support. State: `used` nodes placed so far, `open` unfilled
 * child slots. Feasibility prune: a degree d at the current position is
 * admissible when the remaining node budget can still absorb all open
 * slots (open - 1 + d <= remaining - 1).
 */
inline void for_each_tree(const OffspringModel& model, int n,
                          const std::function<void(const std::vector<uint32_t>&)>& fn) {
  if (n < 1) return;
  std::vector<uint32_t> deg;
  deg.reserve(static_cast<size_t>(n));
  const int max_deg_model = model.max_degree();  // -1 = unbounded
  auto rec = [&](auto&& self, int used, int open) -> void {
    if (used == n) {
      if (open == 0) fn(deg);
      return;
    }
    if (open <= 0) return;
    const int remaining = n - used;
    // after placing d: open' = open - 1 + d must satisfy 0 <= open' <= remaining - 1
    int hi = remaining - open;
    if (max_deg_model >= 0 && max_deg_model < hi) hi = max_deg_model;
    for (int d = 0; d <= hi; ++d) {
      if (!model.has_weight(d)) continue;
      if (open - 1 + d == 0 && used + 1 < n) continue;  // closes early
      deg.push_back(static_cast<uint32_t>(d));
      self(self, used + 1, open - 1 + d);
      deg.pop_back();
    }
  };
  rec(rec, 0, 1);
  return;
}

/// Number of trees of size n over the support (weights ignored); test helper.
inline long count_trees(const OffspringModel& model, int n) {
  long c = 0;
  for_each_tree(model, n, [&](const std::vector<uint32_t>&) { ++c; });
  return c;
}

}  // namespace census
