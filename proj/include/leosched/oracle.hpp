#pragma once

// Soft 0-1 knapsack view of a downlink period on expected values, and an
// exhaustive search giving the optimal selection for small N.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"

namespace leosched {

struct KnapsackItem {
  double value = 0.0;   // cv
  double weight = 0.0;  // wt, packets
  std::size_t index = 0;
};

struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  double capacity = 0.0;  // W = dv_init
  double beta = 1.0;
  double upsilon = 1.0;
};

inline void validate(const KnapsackInstance& k) {
  if (k.beta < 0.0 || k.upsilon < 0.0) throw std::invalid_argument("beta and upsilon must be >= 0");
  for (const auto& it : k.items)
    if (it.weight < 0.0) throw std::invalid_argument("knapsack item weight must be >= 0");
}

/// Item from the contact's expected link availability under its forecast:
/// E[CA] = v*lr*(1-cc), wt = rate*E[CA], expected excess v - wt.
inline KnapsackItem expected_item(const Contact& c, const DownlinkPeriod& period, double beta,
                                  double upsilon) {
  const double v = static_cast<double>(c.volume);
  const double expected_available =
      v * static_cast<double>(period.link_sample_rate) * (1.0 - c.forecast_cloud_cover);
  const double wt = period.packets_per_sample * expected_available;
  const double excess = v - wt;
  const double value = wt > 0.0 ? beta * wt - upsilon * excess : -upsilon * excess;
  return {value, wt, c.index};
}

inline KnapsackInstance expected_instance(const DownlinkPeriod& period, double beta = 1.0,
                                          double upsilon = 1.0) {
  KnapsackInstance k;
  k.capacity = static_cast<double>(period.dv_init);
  k.beta = beta;
  k.upsilon = upsilon;
  for (const auto& c : period.contacts) k.items.push_back(expected_item(c, period, beta, upsilon));
  return k;
}

/// Sum of selected values minus (beta + upsilon) * max(0, overweight).
inline double soft_knapsack_objective(const DecisionMask& mask, const KnapsackInstance& k) {
  if (mask.size() != k.items.size()) throw std::invalid_argument("mask length != item count");
  double value = 0.0, weight = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    value += k.items[i].value;
    weight += k.items[i].weight;
  }
  const double over = weight - k.capacity;
  return value - (k.beta + k.upsilon) * (over > 0.0 ? over : 0.0);
}

inline constexpr std::size_t kMaxEnumerationItems = 24;

struct OracleSolution {
  DecisionMask mask;
  double value = 0.0;
};

/// Lexicographic order on masks read as x[0] x[1] ... with 0 < 1.
inline bool lexicographically_less(const DecisionMask& a, const DecisionMask& b) {
  return a.x < b.x;
}

/// Exhaustive search over all 2^N selections. Ties resolve to the
/// lexicographically smallest mask.
inline OracleSolution brute_force_optimal(const KnapsackInstance& k) {
  const std::size_t n = k.items.size();
  if (n > kMaxEnumerationItems)
    throw std::invalid_argument("brute force limited to " + std::to_string(kMaxEnumerationItems) +
                                " items, got " + std::to_string(n));
  OracleSolution best{DecisionMask(n), soft_knapsack_objective(DecisionMask(n), k)};
  DecisionMask m(n);
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    for (std::size_t i = 0; i < n; ++i) m.set(i, (bits >> i) & 1U);
    const double v = soft_knapsack_objective(m, k);
    if (v > best.value || (v == best.value && lexicographically_less(m, best.mask))) {
      best.value = v;
      best.mask = m;
    }
  }
  return best;
}

/// Greedy by value/weight ratio among positive-value items while they fit.
inline DecisionMask greedy_ratio_selection(const KnapsackInstance& k) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < k.items.size(); ++i)
    if (k.items[i].value > 0.0) order.push_back(i);
  auto ratio = [&](std::size_t i) {
    return k.items[i].weight > 0.0 ? k.items[i].value / k.items[i].weight : 1e300;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
  DecisionMask m(k.items.size());
  double w = 0.0;
  for (auto i : order) {
    if (w + k.items[i].weight <= k.capacity) {
      m.set(i);
      w += k.items[i].weight;
    }
  }
  return m;
}

}  // namespace leosched
