#pragma once

// Episode bookkeeping and the per-episode metrics: delivery ratio, total
// excess energy, mean contact efficiency and the weighted objective.

#include <cstdint>
#include <stdexcept>

#include "leosched/channel.hpp"
#include "leosched/core.hpp"

namespace leosched {

/// Delivered / dv_init over used contacts. dv_init = 0 counts as full delivery.
inline double delivery_ratio(const EpisodeResult& r) {
  if (r.dv_init == 0) return 1.0;
  if (r.dv_remaining <= 0.0) return 1.0;
  double d = 0.0;
  for (std::size_t i = 0; i < r.decisions.size(); ++i)
    if (r.decisions[i]) d += r.delivered_per_contact[i];
  const double ratio = d / static_cast<double>(r.dv_init);
  return ratio > 1.0 ? 1.0 : ratio;
}

inline double total_excess_energy(const EpisodeResult& r) {
  double e = 0.0;
  for (std::size_t i = 0; i < r.decisions.size(); ++i)
    if (r.decisions[i]) e += r.excess_per_contact[i];
  return e;
}

/// Mean of d_i / v_i over used contacts; 1 when nothing was used.
/// Zero-volume contacts are skipped.
inline double mean_contact_efficiency(const EpisodeResult& r) {
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < r.decisions.size(); ++i) {
    if (!r.decisions[i] || r.volume_per_contact[i] == 0) continue;
    sum += r.delivered_per_contact[i] / static_cast<double>(r.volume_per_contact[i]);
    ++used;
  }
  return used == 0 ? 1.0 : sum / static_cast<double>(used);
}

/// w * sum(d) - (1 - w) * sum(e) over used contacts.
inline double weighted_objective(const EpisodeResult& r, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weight w must lie in [0,1]");
  double d = 0.0;
  for (std::size_t i = 0; i < r.decisions.size(); ++i)
    if (r.decisions[i]) d += r.delivered_per_contact[i];
  return w * d - (1.0 - w) * total_excess_energy(r);
}

/// Accumulates per-contact outcomes while a scheme walks a period.
class EpisodeRecorder {
 public:
  EpisodeRecorder(const DownlinkPeriod& period, std::uint64_t seed) {
    const auto n = period.size();
    result_.decisions = DecisionMask(n);
    result_.delivered_per_contact.assign(n, 0.0);
    result_.excess_per_contact.assign(n, 0.0);
    result_.volume_per_contact.resize(n);
    for (std::size_t i = 0; i < n; ++i) result_.volume_per_contact[i] = period.contacts[i].volume;
    result_.dv_init = period.dv_init;
    result_.total_volume = total_volume(period);
    result_.dv_remaining = static_cast<double>(period.dv_init);
    result_.seed = seed;
  }

  double dv_remaining() const { return result_.dv_remaining; }
  double delivered_so_far() const {
    return static_cast<double>(result_.dv_init) - result_.dv_remaining;
  }

  void record(std::size_t position, const TransferOutcome& outcome) {
    result_.decisions.set(position);
    result_.delivered_per_contact[position] = outcome.delivered;
    result_.excess_per_contact[position] = outcome.excess_energy;
    result_.dv_remaining = outcome.dv_after;
  }

  EpisodeResult finish() && {
    result_.delivery_ratio = delivery_ratio(result_);
    result_.total_excess_energy = total_excess_energy(result_);
    result_.mean_contact_efficiency = mean_contact_efficiency(result_);
    return std::move(result_);
  }

  EpisodeResult& raw() { return result_; }

 private:
  EpisodeResult result_;
};

}  // namespace leosched
