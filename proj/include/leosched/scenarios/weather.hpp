#pragma once

// Hourly cloud-cover series: CSV ingestion (timestamp_utc,cloud_cover_percent),
// a synthetic seasonal + AR(1) generator, and the join onto contacts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/scenarios/orbit.hpp"
#include "leosched/time.hpp"

namespace leosched {

struct WeatherSeries {
  std::string station;
  std::vector<TimePoint> hours;      // strictly increasing
  std::vector<double> cloud_cover;   // fractions

  /// Value for the hour containing t.
  std::optional<double> at(TimePoint t) const {
    const TimePoint h = floor_hour(t);
    const auto it = std::lower_bound(hours.begin(), hours.end(), h);
    if (it == hours.end() || *it != h) return std::nullopt;
    return cloud_cover[static_cast<std::size_t>(it - hours.begin())];
  }
};

class WeatherError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline WeatherSeries parse_weather_csv(std::istream& in, const std::string& source,
                                       const std::string& station = {}) {
  WeatherSeries ws;
  ws.station = station;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "timestamp_utc,cloud_cover_percent")
        throw WeatherError(source + ":" + std::to_string(lineno) +
                           ": expected header 'timestamp_utc,cloud_cover_percent'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw WeatherError(source + ":" + std::to_string(lineno) + ": expected two fields");
    TimePoint t;
    double pct = 0.0;
    try {
      t = parse_iso8601(trim(line.substr(0, comma)));
      std::size_t used = 0;
      const std::string num = trim(line.substr(comma + 1));
      pct = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception& e) {
      throw WeatherError(source + ":" + std::to_string(lineno) + ": malformed row: " + e.what());
    }
    if (!(pct >= 0.0 && pct <= 100.0))
      throw WeatherError(source + ":" + std::to_string(lineno) + ": cloud cover " +
                         std::to_string(pct) + " outside [0,100]");
    if (!ws.hours.empty() && !(t > ws.hours.back()))
      throw WeatherError(source + ":" + std::to_string(lineno) + ": timestamps not increasing");
    ws.hours.push_back(t);
    ws.cloud_cover.push_back(pct / 100.0);
  }
  if (ws.hours.empty()) throw WeatherError(source + ": no weather rows");
  return ws;
}

inline WeatherSeries load_weather_csv(const std::string& path, const std::string& station = {}) {
  std::ifstream in(path);
  if (!in) throw WeatherError("cannot open weather file " + path);
  return parse_weather_csv(in, path, station);
}

inline void write_weather_csv(std::ostream& out, const WeatherSeries& ws) {
  out << "timestamp_utc,cloud_cover_percent\n";
  char buf[64];
  for (std::size_t i = 0; i < ws.hours.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.4f", ws.cloud_cover[i] * 100.0);
    out << format_iso8601(ws.hours[i]) << ',' << buf << '\n';
  }
}

/// Seasonal sinusoid plus AR(1) anomaly, clamped to [0, 1].
struct SyntheticWeatherParams {
  double mean = 0.6;
  double seasonal_amplitude = 0.1;
  double peak_day_of_year = 330.0;  // day of the cloudiest season
  double ar_coefficient = 0.97;
  double noise_sd = 0.06;
};

inline WeatherSeries synthetic_weather(const std::string& station,
                                       const SyntheticWeatherParams& p, TimePoint start,
                                       TimePoint end, std::uint64_t seed) {
  WeatherSeries ws;
  ws.station = station;
  Rng rng(seed);
  const double stationary_sd = p.noise_sd / std::sqrt(std::max(1e-12, 1.0 - p.ar_coefficient * p.ar_coefficient));
  double anomaly = stationary_sd * normal01(rng);
  for (TimePoint h = floor_hour(start); h <= end; h += std::chrono::hours(1)) {
    const double day = static_cast<double>(h.time_since_epoch().count()) / 86400.0;
    const double doy = std::fmod(day, 365.2425);
    const double seasonal =
        p.seasonal_amplitude * std::cos(2.0 * kPi * (doy - p.peak_day_of_year) / 365.2425);
    ws.hours.push_back(h);
    ws.cloud_cover.push_back(std::clamp(p.mean + seasonal + anomaly, 0.0, 1.0));
    anomaly = p.ar_coefficient * anomaly + p.noise_sd * normal01(rng);
  }
  return ws;
}

/// A contact produced by orbit propagation, before weather is attached.
struct TimedContact {
  std::string station;
  TimePoint start;
  TimePoint end;
  std::int64_t volume = 0;
  double cloud_cover = 0.0;  // filled by attach_weather
};

/// True cloud cover of each contact = the station's value for the hour
/// containing the contact midpoint.
inline void attach_weather(std::vector<TimedContact>& contacts,
                           const std::map<std::string, WeatherSeries>& series) {
  for (auto& c : contacts) {
    const auto it = series.find(c.station);
    if (it == series.end()) throw WeatherError("no weather series for station " + c.station);
    const TimePoint mid = c.start + (c.end - c.start) / 2;
    const auto v = it->second.at(mid);
    if (!v)
      throw WeatherError("weather for " + c.station + " does not cover " + format_iso8601(mid));
    c.cloud_cover = *v;
  }
}

}  // namespace leosched
