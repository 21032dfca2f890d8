#pragma once

// Case-study pipeline: propagate the orbit over a year, cut access windows
// per station, join hourly cloud cover, then serve 10-contact episodes
// with noisy forecasts.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/scenarios/orbit.hpp"
#include "leosched/scenarios/synthetic.hpp"
#include "leosched/scenarios/weather.hpp"

namespace leosched {

/// FNV-1a; stable across platforms, used to key per-station weather seeds.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct StationWeather {
  GroundStation station;
  SyntheticWeatherParams synthetic;
  std::string csv_path;  // non-empty: load this instead of synthesizing
};

struct CaseStudyProfile {
  std::string name;
  std::vector<StationWeather> stations;
  int year = 2023;
  int days = 365;  // window length from Jan 1
  OrbitSpec orbit;
  double step_s = 10.0;
  double packet_rate = 1.0;  // packets per second of access
  double forecast_noise_sd = 0.2;
  std::size_t episode_contacts = 10;
  double dv_min_fraction = 0.05;
  double dv_max_fraction = 1.0;
  std::uint64_t weather_seed = 0;
};

// City-centre coordinates.
inline GroundStation inuvik() { return {"Inuvik", 68.3607, -133.7230, 15.0, 20.0}; }
inline GroundStation calgary() { return {"Calgary", 51.0447, -114.0719, 1045.0, 20.0}; }
inline GroundStation ottawa() { return {"Ottawa", 45.4215, -75.6972, 70.0, 20.0}; }

inline SyntheticWeatherParams synthetic_params(double mean, double amplitude, double peak_doy) {
  SyntheticWeatherParams p;
  p.mean = mean;
  p.seasonal_amplitude = amplitude;
  p.peak_day_of_year = peak_doy;
  return p;
}

/// Training split: Inuvik and Calgary over 2023.
inline CaseStudyProfile case_study_train_profile() {
  CaseStudyProfile p;
  p.name = "train";
  p.year = 2023;
  p.weather_seed = 2023;
  p.stations = {{inuvik(), synthetic_params(0.65, 0.12, 300.0), {}},
                {calgary(), synthetic_params(0.50, 0.08, 150.0), {}}};
  return p;
}

/// Test split: Ottawa and Calgary over 2024.
inline CaseStudyProfile case_study_test_profile() {
  CaseStudyProfile p;
  p.name = "test";
  p.year = 2024;
  p.days = 366;
  p.weather_seed = 2024;
  p.stations = {{ottawa(), synthetic_params(0.60, 0.10, 340.0), {}},
                {calgary(), synthetic_params(0.50, 0.08, 150.0), {}}};
  return p;
}

inline CaseStudyProfile case_study_profile(const std::string& name) {
  if (name == "train") return case_study_train_profile();
  if (name == "test") return case_study_test_profile();
  throw std::invalid_argument("unknown case-study profile '" + name + "' (train|test)");
}

inline void validate(const CaseStudyProfile& p) {
  if (p.stations.empty()) throw std::invalid_argument("case study: no stations");
  if (p.days < 1) throw std::invalid_argument("case study: days must be >= 1");
  if (!(p.packet_rate > 0.0)) throw std::invalid_argument("case study: packet_rate must be > 0");
  if (p.forecast_noise_sd < 0.0) throw std::invalid_argument("case study: negative forecast noise");
  if (p.episode_contacts < 1) throw std::invalid_argument("case study: episode_contacts must be >= 1");
  if (!(p.dv_min_fraction >= 0.0 && p.dv_min_fraction <= p.dv_max_fraction))
    throw std::invalid_argument("case study: bad dv fraction range");
  validate(p.orbit);
}

/// Contacts of a whole profile window with true cloud cover attached.
struct CaseStudyData {
  CaseStudyProfile profile;
  std::vector<TimedContact> contacts;
  std::map<std::string, WeatherSeries> weather;
};

inline CaseStudyData build_case_study_data(const CaseStudyProfile& profile) {
  validate(profile);
  CaseStudyData data;
  data.profile = profile;
  const TimePoint start = make_time(profile.year, 1, 1);
  const TimePoint end = start + std::chrono::hours(24 * profile.days);

  std::vector<GroundStation> stations;
  for (const auto& sw : profile.stations) {
    stations.push_back(sw.station);
    const auto& name = sw.station.name;
    data.weather[name] =
        sw.csv_path.empty()
            ? synthetic_weather(name, sw.synthetic, start, end + std::chrono::hours(1),
                                derive_seed(profile.weather_seed, fnv1a(name)))
            : load_weather_csv(sw.csv_path, name);
  }

  for (const auto& w : compute_contacts(profile.orbit, stations, start, end, profile.step_s)) {
    TimedContact c;
    c.station = stations[w.station].name;
    c.start = w.start;
    c.end = w.end;
    c.volume = static_cast<std::int64_t>(std::llround(w.duration_s() * profile.packet_rate));
    data.contacts.push_back(c);
  }
  attach_weather(data.contacts, data.weather);
  return data;
}

/// A random run of `episode_contacts` consecutive contacts, re-indexed
/// from 0. dv_init is a fixed fraction of the window capacity when given,
/// otherwise a uniform integer in [min, max] x V.
inline DownlinkPeriod build_case_study_episode(const CaseStudyData& data, Rng& rng,
                                               std::optional<double> dv_fraction = std::nullopt) {
  const auto& p = data.profile;
  const std::size_t n = p.episode_contacts;
  if (data.contacts.size() < n)
    throw std::runtime_error("case study '" + p.name + "': only " +
                             std::to_string(data.contacts.size()) + " contacts, need " +
                             std::to_string(n));
  const auto first = static_cast<std::size_t>(
      uniform_int(rng, 0, static_cast<std::int64_t>(data.contacts.size() - n)));
  std::vector<Contact> contacts(n);
  std::int64_t v_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tc = data.contacts[first + i];
    contacts[i] = Contact{i, tc.cloud_cover, perturb_forecast(tc.cloud_cover, p.forecast_noise_sd, rng),
                          tc.volume, tc.start, tc.end};
    v_total += tc.volume;
  }
  std::int64_t dv = 0;
  const auto v = static_cast<double>(v_total);
  if (dv_fraction) {
    if (!(*dv_fraction >= 0.0)) throw std::invalid_argument("dv fraction must be >= 0");
    dv = static_cast<std::int64_t>(std::llround(*dv_fraction * v));
  } else {
    const auto lo = static_cast<std::int64_t>(std::ceil(p.dv_min_fraction * v - 1e-9));
    const auto hi = static_cast<std::int64_t>(std::floor(p.dv_max_fraction * v + 1e-9));
    dv = uniform_int(rng, lo, std::max(lo, hi));
  }
  return make_period(std::move(contacts), dv);
}

}  // namespace leosched
