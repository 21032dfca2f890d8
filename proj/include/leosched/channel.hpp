#pragma once

// On-off optical channel: per-sample link availability drawn against cloud
// cover, then packet transfer over the available samples.

#include <cstdint>

#include "leosched/core.hpp"

namespace leosched {

struct TransferOutcome {
  double delivered = 0.0;
  double excess_energy = 0.0;
  double dv_after = 0.0;
};

/// Counts the samples (volume * lr Bernoulli trials) whose Uniform(0,1)
/// draw strictly exceeds the cloud cover.
inline std::int64_t sample_link_availability(double cloud_cover, std::int64_t volume,
                                             int link_sample_rate, Rng& rng) {
  const std::int64_t samples = volume * link_sample_rate;
  std::int64_t available = 0;
  for (std::int64_t k = 0; k < samples; ++k)
    if (cloud_cover < uniform01(rng)) ++available;
  return available;
}

/// Moves data over `available` samples, `packets_per_sample` each, until the
/// buffer empties; the final sample may carry a fractional remainder. Every
/// packet slot of the contact that did not carry data counts as excess.
inline TransferOutcome transfer(std::int64_t available, double dv, std::int64_t volume,
                                double packets_per_sample) {
  double delivered = 0.0;
  for (std::int64_t i = 0; i < available; ++i) {
    if (dv > 0.0) {
      if (dv >= packets_per_sample) {
        dv -= packets_per_sample;
        delivered += packets_per_sample;
      } else {
        delivered += dv;
        dv = 0.0;
      }
    }
  }
  return {delivered, static_cast<double>(volume) - delivered, dv};
}

/// Keyed per-contact channel randomness. A contact's draws depend only on
/// (episode seed, contact index), so two schemes that both use contact i
/// see the same realisation regardless of what they did before.
class ChannelStream {
 public:
  explicit ChannelStream(std::uint64_t episode_seed)
      : key_(derive_seed(episode_seed, kChannelDomain)) {}

  Rng for_contact(std::size_t index) const {
    return Rng(derive_seed(key_, static_cast<std::uint64_t>(index)));
  }

 private:
  std::uint64_t key_;
};

/// Single entry point for using a contact: availability from the TRUE
/// cloud cover, then transfer.
inline TransferOutcome attempt_contact(const Contact& contact, double dv,
                                       const DownlinkPeriod& period, Rng& rng) {
  const auto available =
      sample_link_availability(contact.cloud_cover, contact.volume, period.link_sample_rate, rng);
  return transfer(available, dv, contact.volume, period.packets_per_sample);
}

inline TransferOutcome attempt_contact(const Contact& contact, double dv,
                                       const DownlinkPeriod& period,
                                       const ChannelStream& channel) {
  Rng rng = channel.for_contact(contact.index);
  return attempt_contact(contact, dv, period, rng);
}

}  // namespace leosched
