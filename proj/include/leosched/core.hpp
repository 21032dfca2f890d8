#pragma once

// Domain types shared by every scheduling scheme: contacts, downlink periods,
// decision masks, per-episode results, and the seeding discipline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace leosched {

using Rng = std::mt19937_64;
using TimePoint = std::chrono::sys_seconds;

/// Uniform draw in [0, 1) from the top 53 bits of one engine output.
/// Stable across standard library implementations, unlike
/// std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [lo, hi] by rejection on the top of the range.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

/// Standard normal via Box-Muller (one variate per call).
inline double normal01(Rng& rng) {
  double u1;
  do u1 = uniform01(rng);
  while (u1 <= 0.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit stream key from (parent, key). Used for
/// master seed -> episode seed and episode seed -> per-purpose streams.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
  return mix64(parent ^ mix64(key ^ 0x5851f42d4c957f2dULL));
}

// Stream domains under an episode seed.
inline constexpr std::uint64_t kScenarioDomain = 0x5343454eULL;  // "SCEN"
inline constexpr std::uint64_t kChannelDomain = 0x4348414eULL;   // "CHAN"
inline constexpr std::uint64_t kPolicyDomain = 0x504f4c49ULL;    // "POLI"

struct Contact {
  std::size_t index = 0;
  double cloud_cover = 0.0;           // true value, drives the channel
  double forecast_cloud_cover = 0.0;  // what schedulers see
  std::int64_t volume = 0;            // packets at full availability
  std::optional<TimePoint> start;
  std::optional<TimePoint> end;
};

inline void validate(const Contact& c) {
  if (!(c.cloud_cover >= 0.0 && c.cloud_cover <= 1.0))
    throw std::invalid_argument("contact " + std::to_string(c.index) +
                                ": cloud_cover outside [0,1]");
  if (!(c.forecast_cloud_cover >= 0.0 && c.forecast_cloud_cover <= 1.0))
    throw std::invalid_argument("contact " + std::to_string(c.index) +
                                ": forecast_cloud_cover outside [0,1]");
  if (c.volume < 0)
    throw std::invalid_argument("contact " + std::to_string(c.index) +
                                ": negative volume");
}

struct DownlinkPeriod {
  std::vector<Contact> contacts;
  std::int64_t dv_init = 0;
  int link_sample_rate = 1;
  double packets_per_sample = 1.0;

  std::size_t size() const { return contacts.size(); }
};

inline std::int64_t total_volume(const DownlinkPeriod& period) {
  return std::accumulate(period.contacts.begin(), period.contacts.end(),
                         std::int64_t{0},
                         [](std::int64_t acc, const Contact& c) { return acc + c.volume; });
}

/// Capacity left after consuming the first `consumed` contacts
/// (consumed = 0 is the period start, consumed = N the end).
inline std::int64_t remaining_capacity(const DownlinkPeriod& period, std::size_t consumed) {
  if (consumed > period.size())
    throw std::out_of_range("remaining_capacity: ordinal " + std::to_string(consumed) +
                            " beyond " + std::to_string(period.size()) + " contacts");
  std::int64_t used = 0;
  for (std::size_t i = 0; i < consumed; ++i) used += period.contacts[i].volume;
  return total_volume(period) - used;
}

/// Throws std::invalid_argument when the period violates a type invariant.
inline void validate(const DownlinkPeriod& period) {
  if (period.dv_init < 0) throw std::invalid_argument("dv_init must be >= 0");
  if (period.link_sample_rate < 1)
    throw std::invalid_argument("link_sample_rate must be >= 1");
  if (!(period.packets_per_sample > 0.0))
    throw std::invalid_argument("packets_per_sample must be > 0");
  for (std::size_t i = 0; i < period.contacts.size(); ++i) {
    validate(period.contacts[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (period.contacts[j].index == period.contacts[i].index)
        throw std::invalid_argument("duplicate contact index " +
                                    std::to_string(period.contacts[i].index));
  }
}

/// Builds a period with equal-rate defaults: one fully available contact
/// delivers exactly its volume.
inline DownlinkPeriod make_period(std::vector<Contact> contacts, std::int64_t dv_init,
                                  int link_sample_rate = 1) {
  DownlinkPeriod p;
  p.contacts = std::move(contacts);
  p.dv_init = dv_init;
  p.link_sample_rate = link_sample_rate;
  p.packets_per_sample = 1.0 / static_cast<double>(link_sample_rate);
  validate(p);
  return p;
}

/// Convenience for tests and synthetic scenarios: forecast equals truth.
inline std::vector<Contact> contacts_from(const std::vector<double>& cloud_cover,
                                         const std::vector<std::int64_t>& volume) {
  if (cloud_cover.size() != volume.size())
    throw std::invalid_argument("contacts_from: size mismatch");
  std::vector<Contact> out(cloud_cover.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Contact{i, cloud_cover[i], cloud_cover[i], volume[i], {}, {}};
  return out;
}

struct DecisionMask {
  std::vector<std::uint8_t> x;

  DecisionMask() = default;
  explicit DecisionMask(std::size_t n) : x(n, 0) {}
  DecisionMask(std::initializer_list<std::uint8_t> bits) : x(bits) {}

  std::size_t size() const { return x.size(); }
  bool operator[](std::size_t i) const { return x[i] != 0; }
  void set(std::size_t i, bool on = true) { x[i] = on ? 1 : 0; }
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(x.begin(), x.end(), std::uint8_t{1}));
  }
  friend bool operator==(const DecisionMask&, const DecisionMask&) = default;
};

struct EpisodeResult {
  DecisionMask decisions;
  std::vector<double> delivered_per_contact;
  std::vector<double> excess_per_contact;
  std::vector<std::int64_t> volume_per_contact;
  std::int64_t dv_init = 0;
  std::int64_t total_volume = 0;
  double dv_remaining = 0.0;
  double delivery_ratio = 0.0;
  double total_excess_energy = 0.0;
  double mean_contact_efficiency = 0.0;
  std::optional<double> rl_return;
  std::uint64_t seed = 0;
};

}  // namespace leosched
