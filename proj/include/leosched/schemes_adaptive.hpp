#pragma once

// Adaptive sorting: the static sorting plan, re-planned over the strictly
// future contacts after every executed contact.

#include <cstdint>
#include <vector>

#include "leosched/channel.hpp"
#include "leosched/core.hpp"
#include "leosched/metrics.hpp"
#include "leosched/schemes_static.hpp"

namespace leosched {

inline double replan_charge(const Contact& c, SortBudgetRule rule) {
  const double v = static_cast<double>(c.volume);
  return rule == SortBudgetRule::literal ? v : v * (1.0 - c.forecast_cloud_cover);
}

/// Rebuilds mask entries [first, N) from the remaining buffer. Entries
/// before `first` are never touched.
inline void replan_future(DecisionMask& mask, const std::vector<Contact>& contacts,
                          std::size_t first, double dv_remaining, double tau,
                          SortBudgetRule rule) {
  for (std::size_t j = first; j < contacts.size(); ++j) mask.set(j, false);
  double budget = dv_remaining * tau;
  for (auto pos : sort_by_forecast(contacts, first)) {
    const auto& c = contacts[pos];
    if (budget > 0.0 && c.forecast_cloud_cover < 1.0) {
      mask.set(pos);
      budget -= replan_charge(c, rule);
    }
  }
}

struct AdaptiveSortTrace {
  DecisionMask initial_plan;
  std::vector<DecisionMask> plans_after_execution;  // one per executed contact
};

inline EpisodeResult adaptive_sort_run(const DownlinkPeriod& period, double tau,
                                       std::uint64_t episode_seed,
                                       SortBudgetRule rule = SortBudgetRule::literal,
                                       AdaptiveSortTrace* trace = nullptr) {
  const ChannelStream channel(episode_seed);
  EpisodeRecorder rec(period, episode_seed);
  DecisionMask plan = static_sort_plan(period.dv_init, period.contacts, tau, rule);
  if (trace) trace->initial_plan = plan;

  for (std::size_t i = 0; i < period.size(); ++i) {
    if (rec.dv_remaining() <= 0.0) break;
    if (!plan[i]) continue;
    const auto& c = period.contacts[i];
    rec.record(i, attempt_contact(c, rec.dv_remaining(), period, channel));
    replan_future(plan, period.contacts, i + 1, rec.dv_remaining(), tau, rule);
    if (trace) trace->plans_after_execution.push_back(plan);
  }
  return std::move(rec).finish();
}

}  // namespace leosched
