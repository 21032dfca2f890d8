#pragma once

// Two-body circular orbit over a uniformly rotating spherical Earth, and
// access-interval extraction against a set of ground stations.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/time.hpp"

namespace leosched {

namespace earth {
inline constexpr double kRadiusKm = 6378.137;
inline constexpr double kMuKm3s2 = 398600.4418;
inline constexpr double kRotationRadS = 7.2921150e-5;
}  // namespace earth

inline constexpr double kPi = 3.14159265358979323846;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

struct OrbitSpec {
  double altitude_km = 500.0;
  double eccentricity = 0.0;
  double inclination_deg = 99.5;
  double raan_deg = 0.0;
  double true_anomaly_deg = 0.0;
  double arg_periapsis_deg = 0.0;
};

struct GroundStation {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
  double min_elevation_deg = 20.0;
};

inline void validate(const OrbitSpec& o) {
  if (o.eccentricity != 0.0) throw std::invalid_argument("only circular orbits are supported");
  if (!(o.altitude_km > 0.0)) throw std::invalid_argument("orbit altitude must be > 0");
}

inline void validate(const GroundStation& g) {
  if (std::abs(g.latitude_deg) > 90.0)
    throw std::invalid_argument("station " + g.name + ": |latitude| > 90");
  if (!(g.min_elevation_deg > 0.0 && g.min_elevation_deg < 90.0))
    throw std::invalid_argument("station " + g.name + ": min elevation outside (0, 90)");
}

inline double semi_major_axis_km(const OrbitSpec& o) { return earth::kRadiusKm + o.altitude_km; }

inline double mean_motion_rad_s(const OrbitSpec& o) {
  const double a = semi_major_axis_km(o);
  return std::sqrt(earth::kMuKm3s2 / (a * a * a));
}

inline double orbital_period_s(const OrbitSpec& o) { return 2.0 * kPi / mean_motion_rad_s(o); }

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Greenwich mean sidereal angle (radians) at a UTC instant.
inline double gmst_rad(TimePoint t) {
  const double jd = static_cast<double>(t.time_since_epoch().count()) / 86400.0 + 2440587.5;
  const double deg = 280.46061837 + 360.98564736629 * (jd - 2451545.0);
  double r = std::fmod(deg2rad(deg), 2.0 * kPi);
  return r < 0.0 ? r + 2.0 * kPi : r;
}

/// Satellite position in the Earth-fixed frame, `dt` seconds after epoch.
inline Vec3 satellite_ecef(const OrbitSpec& o, TimePoint epoch, double dt) {
  const double a = semi_major_axis_km(o);
  const double u = deg2rad(o.arg_periapsis_deg + o.true_anomaly_deg) + mean_motion_rad_s(o) * dt;
  const double inc = deg2rad(o.inclination_deg), raan = deg2rad(o.raan_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);
  const Vec3 eci{a * (cu * co - su * ci * so), a * (cu * so + su * ci * co), a * su * si};
  const double theta = gmst_rad(epoch) + earth::kRotationRadS * dt;
  const double ct = std::cos(theta), st = std::sin(theta);
  return {ct * eci[0] + st * eci[1], -st * eci[0] + ct * eci[1], eci[2]};
}

inline Vec3 station_ecef(const GroundStation& g) {
  const double r = earth::kRadiusKm + g.altitude_m / 1000.0;
  const double lat = deg2rad(g.latitude_deg), lon = deg2rad(g.longitude_deg);
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

/// Topocentric elevation (degrees) of the satellite seen from the station.
inline double elevation_deg(const Vec3& sat, const GroundStation& g) {
  const Vec3 s = station_ecef(g);
  const Vec3 up{s[0] / norm(s), s[1] / norm(s), s[2] / norm(s)};
  const Vec3 rho{sat[0] - s[0], sat[1] - s[1], sat[2] - s[2]};
  return rad2deg(std::asin(dot(rho, up) / norm(rho)));
}

struct GeoPoint {
  double latitude_deg;
  double longitude_deg;
};

inline GeoPoint subsatellite_point(const OrbitSpec& o, TimePoint epoch, double dt) {
  const Vec3 r = satellite_ecef(o, epoch, dt);
  return {rad2deg(std::asin(r[2] / norm(r))), rad2deg(std::atan2(r[1], r[0]))};
}

struct AccessWindow {
  std::size_t station = 0;  // index into the station list
  TimePoint start;
  TimePoint end;
  double max_elevation_deg = 0.0;

  double duration_s() const {
    return static_cast<double>((end - start).count());
  }
};

/// Maximal intervals during which exactly one station is in use. When
/// several stations are above their mask the highest elevation wins.
/// Rise/set edges are linearly interpolated between steps.
inline std::vector<AccessWindow> compute_contacts(const OrbitSpec& orbit,
                                                  const std::vector<GroundStation>& stations,
                                                  TimePoint window_start, TimePoint window_end,
                                                  double step_s = 10.0) {
  validate(orbit);
  for (const auto& g : stations) validate(g);
  if (!(window_end > window_start)) throw std::invalid_argument("empty contact window");
  if (!(step_s > 0.0 && step_s <= 30.0)) throw std::invalid_argument("step must lie in (0, 30] s");

  const double span = static_cast<double>((window_end - window_start).count());
  const auto steps = static_cast<std::size_t>(std::floor(span / step_s)) + 1;
  const std::size_t ns = stations.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<AccessWindow> out;
  std::vector<double> prev_el(ns, -90.0), el(ns);
  std::size_t current = kNone;
  double current_start = 0.0, current_max = 0.0;

  auto to_time = [&](double dt) {
    return window_start + std::chrono::seconds(static_cast<std::int64_t>(std::llround(dt)));
  };
  auto crossing = [&](double t0, double e0, double t1, double e1, double mask) {
    if (e1 == e0) return t1;
    return t0 + (mask - e0) / (e1 - e0) * (t1 - t0);
  };
  auto close = [&](double end_dt) {
    if (end_dt > current_start)
      out.push_back({current, to_time(current_start), to_time(end_dt), current_max});
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const double dt = std::min(static_cast<double>(k) * step_s, span);
    const Vec3 sat = satellite_ecef(orbit, window_start, dt);
    std::size_t best = kNone;
    for (std::size_t s = 0; s < ns; ++s) {
      el[s] = elevation_deg(sat, stations[s]);
      if (el[s] >= stations[s].min_elevation_deg && (best == kNone || el[s] > el[best])) best = s;
    }
    if (best != current) {
      const double prev_dt = k == 0 ? 0.0 : std::min(static_cast<double>(k - 1) * step_s, span);
      if (current != kNone) {
        const double end_dt =
            best == kNone ? crossing(prev_dt, prev_el[current], dt, el[current],
                                     stations[current].min_elevation_deg)
                          : dt;
        close(end_dt);
      }
      if (best != kNone) {
        current_start = (k == 0 || current != kNone)
                            ? dt
                            : crossing(prev_dt, prev_el[best], dt, el[best],
                                       stations[best].min_elevation_deg);
        current_max = el[best];
      }
      current = best;
    } else if (current != kNone) {
      current_max = std::max(current_max, el[current]);
    }
    prev_el = el;
  }
  if (current != kNone) close(span);
  return out;
}

}  // namespace leosched
