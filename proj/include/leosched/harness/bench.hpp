#pragma once

// Scaling benchmark: wall time of each scheme's decision logic as the
// number of contacts grows. Channel sampling is left out; contacts are
// assumed to deliver their expected volume so every decision is exercised.

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/harness/experiment.hpp"
#include "leosched/schemes_adaptive.hpp"
#include "leosched/schemes_static.hpp"

namespace leosched {

struct BenchRow {
  std::string scheme;
  std::size_t n = 0;
  double seconds = 0.0;  // median over repetitions, per decision pass
};

inline std::vector<Contact> bench_contacts(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Contact> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cc = uniform01(rng);
    out[i] = Contact{i, cc, cc, 10, {}, {}};
  }
  return out;
}

/// One pass of the scheme's decision logic; returns the selection count so
/// the optimiser cannot drop the work.
inline std::size_t decision_pass(SchemeKind kind, const std::vector<Contact>& contacts,
                                 std::int64_t dv_init) {
  // Built once so the timing covers decisions only.
  static const ThresholdConfig multi = ThresholdConfig::quintiles({0.5, 0.6, 0.7, 0.8, 0.9});
  std::size_t used = 0;
  double delivered = 0.0;
  const double dv = static_cast<double>(dv_init);
  const double total = 10.0 * static_cast<double>(contacts.size());
  switch (kind) {
    case SchemeKind::cgr:
    case SchemeKind::threshold:
    case SchemeKind::multi_threshold:
      for (const auto& c : contacts) {
        bool go = false;
        if (kind == SchemeKind::cgr) go = cgr_decide(delivered, dv);
        else if (kind == SchemeKind::threshold) go = threshold_decide(c.forecast_cloud_cover, 0.7, delivered, dv);
        else go = multi_threshold_decide(c.forecast_cloud_cover, dv - delivered, total, multi, delivered, dv);
        if (go) {
          ++used;
          delivered += static_cast<double>(c.volume) * (1.0 - c.cloud_cover);
        }
      }
      return used;
    case SchemeKind::static_sort:
      return static_sort_plan(dv_init, contacts, 1.0).count();
    case SchemeKind::adaptive_sort: {
      DecisionMask plan = static_sort_plan(dv_init, contacts, 1.0);
      double remaining = dv;
      for (std::size_t i = 0; i < contacts.size() && remaining > 0.0; ++i) {
        if (!plan[i]) continue;
        remaining -= static_cast<double>(contacts[i].volume) * (1.0 - contacts[i].cloud_cover);
        replan_future(plan, contacts, i + 1, remaining, 1.0, SortBudgetRule::literal);
        ++used;
      }
      return used;
    }
    case SchemeKind::policy:
      break;
  }
  throw std::invalid_argument("benchmark does not cover policy schemes");
}

inline std::vector<BenchRow> scaling_benchmark(SchemeKind kind, const std::string& name,
                                               const std::vector<std::size_t>& grid,
                                               int repetitions, std::uint64_t seed = 1) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::vector<BenchRow> out;
  volatile std::size_t sink = 0;
  for (std::size_t n : grid) {
    const auto contacts = bench_contacts(n, derive_seed(seed, n));
    // Half the capacity keeps the sorters busy for most of the period.
    const auto dv_init = static_cast<std::int64_t>(5 * n);
    // Each sample repeats the pass for at least 5 ms so small sizes sit well
    // above clock resolution and scheduler jitter.
    std::vector<double> samples;
    for (int r = 0; r < repetitions; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      long passes = 0;
      double elapsed = 0.0;
      do {
        for (int k = 0; k < 64; ++k) sink = sink + decision_pass(kind, contacts, dv_init);
        passes += 64;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } while (elapsed < 5e-3);
      samples.push_back(elapsed / static_cast<double>(passes));
    }
    out.push_back({name, n, summarize(samples).median});
  }
  return out;
}

/// Least-squares slope of log(seconds) on log(n), ignoring n = 0 rows.
inline double log_log_slope(const std::vector<BenchRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows)
    if (r.n > 0 && r.seconds > 0.0) {
      x.push_back(std::log(static_cast<double>(r.n)));
      y.push_back(std::log(r.seconds));
    }
  if (x.size() < 2) throw std::invalid_argument("slope needs at least two positive points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace leosched
