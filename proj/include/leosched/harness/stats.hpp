#pragma once

// Descriptive statistics for batch results: linear-interpolation quantiles
// (R type 7), mean and sample standard deviation.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace leosched {

/// Quantile of sorted data, h = (n-1)p.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> data, double p) {
  std::sort(data.begin(), data.end());
  return quantile_sorted(data, p);
}

inline double mean_of(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("mean of empty data");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample standard deviation; 0 for a single value.
inline double sd_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

struct Summary {
  double mean = 0.0, median = 0.0, uq = 0.0, lq = 0.0, sd = 0.0;
  std::size_t n = 0;
};

inline Summary summarize(const std::vector<double>& data) {
  if (data.empty()) throw std::invalid_argument("summarize: no data");
  std::vector<double> s = data;
  std::sort(s.begin(), s.end());
  return {mean_of(s), quantile_sorted(s, 0.5), quantile_sorted(s, 0.75), quantile_sorted(s, 0.25),
          sd_of(s), s.size()};
}

struct StatsRow {
  std::string scheme;
  std::string metric;  // delivery_ratio, mean_contact_efficiency, ...
  Summary stats;
};

}  // namespace leosched
