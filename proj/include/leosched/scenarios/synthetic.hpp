#pragma once

// Synthetic downlink periods: the uniform training/testing configuration,
// the variable cloud/volume grid, and forecast perturbation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "leosched/core.hpp"

namespace leosched {

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// forecast = clamp(true + Normal(0, sd), 0, 1)
inline double perturb_forecast(double true_cc, double sd, Rng& rng) {
  if (sd < 0.0) throw std::invalid_argument("forecast noise sd must be >= 0");
  if (sd == 0.0) return true_cc;
  return clamp01(true_cc + sd * normal01(rng));
}

struct UniformScenarioConfig {
  int n_contacts = 10;
  std::int64_t contact_volume = 10;
  double dv_min_fraction = 0.05;  // of V
  double dv_max_fraction = 1.0;
  double forecast_noise_sd = 0.0;
  int link_sample_rate = 1;
};

/// Equal contacts, cloud cover ~ U(0,1), dv_init uniform integer in
/// [ceil(min*V), floor(max*V)] (5..100 for the defaults).
inline DownlinkPeriod gen_uniform_scenario(const UniformScenarioConfig& cfg, Rng& rng) {
  if (cfg.n_contacts < 0 || cfg.contact_volume < 0)
    throw std::invalid_argument("uniform scenario: negative size");
  std::vector<Contact> contacts(static_cast<std::size_t>(cfg.n_contacts));
  const std::int64_t v = cfg.contact_volume * cfg.n_contacts;
  const auto lo = static_cast<std::int64_t>(std::ceil(cfg.dv_min_fraction * static_cast<double>(v) - 1e-9));
  const auto hi = static_cast<std::int64_t>(std::floor(cfg.dv_max_fraction * static_cast<double>(v) + 1e-9));
  const std::int64_t dv = uniform_int(rng, lo, hi);
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    const double cc = uniform01(rng);
    contacts[i] = Contact{i, cc, perturb_forecast(cc, cfg.forecast_noise_sd, rng),
                          cfg.contact_volume, {}, {}};
  }
  return make_period(std::move(contacts), dv, cfg.link_sample_rate);
}

inline DownlinkPeriod gen_uniform_scenario(Rng& rng) {
  return gen_uniform_scenario(UniformScenarioConfig{}, rng);
}

struct VariableScenarioConfig {
  double dv_fraction = 0.1;   // dv_init = fraction * V
  double cc_mean = 0.8;
  double cc_sd = 0.2;
  int n_contacts = 10;
  std::int64_t contact_volume = 10;
  int link_sample_rate = 1;
};

/// Equal contacts, cloud cover ~ clamp(Normal(mean, sd)), fixed dv_init.
inline DownlinkPeriod gen_variable_scenario(const VariableScenarioConfig& cfg, Rng& rng) {
  if (!(cfg.dv_fraction >= 0.0) || !(cfg.cc_sd >= 0.0))
    throw std::invalid_argument("variable scenario: bad parameters");
  std::vector<Contact> contacts(static_cast<std::size_t>(cfg.n_contacts));
  const std::int64_t v = cfg.contact_volume * cfg.n_contacts;
  const auto dv = static_cast<std::int64_t>(std::llround(cfg.dv_fraction * static_cast<double>(v)));
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    const double cc = clamp01(cfg.cc_mean + cfg.cc_sd * normal01(rng));
    contacts[i] = Contact{i, cc, cc, cfg.contact_volume, {}, {}};
  }
  return make_period(std::move(contacts), dv, cfg.link_sample_rate);
}

inline DownlinkPeriod gen_variable_scenario(double dv_fraction, double cc_mean, Rng& rng) {
  VariableScenarioConfig cfg;
  cfg.dv_fraction = dv_fraction;
  cfg.cc_mean = cc_mean;
  return gen_variable_scenario(cfg, rng);
}

}  // namespace leosched
