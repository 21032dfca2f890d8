#pragma once

// Static schedulers: CGR baseline, single/multi cloud-cover thresholds, the
// ground-side threshold tuning loop, and the static sorting planner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leosched/channel.hpp"
#include "leosched/core.hpp"
#include "leosched/metrics.hpp"

namespace leosched {

// ---------------------------------------------------------------------------
// Per-contact deciders
// ---------------------------------------------------------------------------

/// Use every contact until all data is delivered.
constexpr bool cgr_decide(double delivered_so_far, double dv_init) {
  return delivered_so_far < dv_init;
}

/// Skip contacts whose forecast cloud cover exceeds T (inclusive at T).
constexpr bool threshold_decide(double forecast_cc, double threshold, double delivered_so_far,
                                double dv_init) {
  return forecast_cc <= threshold && delivered_so_far < dv_init;
}

/// Thresholds keyed by remaining-data fraction ranges (lo, hi].
struct ThresholdConfig {
  struct Range {
    double upper;      // upper bound of the range as a fraction of V
    double threshold;  // cloud cover threshold applied inside the range
  };
  std::vector<Range> ranges;

  static ThresholdConfig single(double threshold) { return {{{1.0, threshold}}}; }

  /// Five equal-width ranges, one threshold each.
  static ThresholdConfig quintiles(const std::vector<double>& thresholds) {
    ThresholdConfig cfg;
    const auto n = thresholds.size();
    for (std::size_t i = 0; i < n; ++i)
      cfg.ranges.push_back({static_cast<double>(i + 1) / static_cast<double>(n), thresholds[i]});
    cfg.ranges.back().upper = 1.0;
    return cfg;
  }

  /// Threshold for a remaining-data fraction; fractions above the last
  /// upper bound (dv_init > V) fall into the last range.
  double threshold_for(double fraction) const {
    for (const auto& r : ranges)
      if (fraction <= r.upper) return r.threshold;
    return ranges.back().threshold;
  }
};

inline void validate(const ThresholdConfig& cfg) {
  if (cfg.ranges.empty()) throw std::invalid_argument("threshold config has no ranges");
  double prev = 0.0;
  for (const auto& r : cfg.ranges) {
    if (!(r.upper > prev)) throw std::invalid_argument("threshold range uppers must increase");
    if (!(r.threshold >= 0.0 && r.threshold <= 1.0))
      throw std::invalid_argument("threshold outside [0,1]");
    prev = r.upper;
  }
  if (cfg.ranges.back().upper != 1.0)
    throw std::invalid_argument("last threshold range must end at 1.0");
}

inline bool multi_threshold_decide(double forecast_cc, double dv_remaining, double total_volume,
                                   const ThresholdConfig& cfg, double delivered_so_far,
                                   double dv_init) {
  if (dv_remaining <= 0.0 || total_volume <= 0.0) return false;
  const double t = cfg.threshold_for(dv_remaining / total_volume);
  return threshold_decide(forecast_cc, t, delivered_so_far, dv_init);
}

// ---------------------------------------------------------------------------
// Temporal execution loop
// ---------------------------------------------------------------------------

struct DecisionContext {
  const Contact& contact;
  std::size_t position;
  double delivered_so_far;
  double dv_remaining;
  double dv_init;
  double total_volume;
};

using Decider = std::function<bool(const DecisionContext&)>;

/// Walks contacts in temporal order asking `decide` about each one.
inline EpisodeResult run_static_scheme(const Decider& decide, const DownlinkPeriod& period,
                                       std::uint64_t episode_seed) {
  const ChannelStream channel(episode_seed);
  EpisodeRecorder rec(period, episode_seed);
  const double v_total = static_cast<double>(total_volume(period));
  const double dv_init = static_cast<double>(period.dv_init);
  for (std::size_t i = 0; i < period.size(); ++i) {
    const auto& c = period.contacts[i];
    const DecisionContext ctx{c, i, rec.delivered_so_far(), rec.dv_remaining(), dv_init, v_total};
    if (decide(ctx)) rec.record(i, attempt_contact(c, rec.dv_remaining(), period, channel));
  }
  return std::move(rec).finish();
}

/// Executes a precomputed mask in temporal order. Masked contacts that come
/// up after the buffer has emptied are not used.
inline EpisodeResult run_static_scheme(const DecisionMask& mask, const DownlinkPeriod& period,
                                       std::uint64_t episode_seed) {
  if (mask.size() != period.size()) throw std::invalid_argument("mask length != contact count");
  return run_static_scheme(
      [&mask](const DecisionContext& ctx) { return mask[ctx.position] && ctx.dv_remaining > 0.0; },
      period, episode_seed);
}

inline Decider cgr_decider() {
  return [](const DecisionContext& ctx) { return cgr_decide(ctx.delivered_so_far, ctx.dv_init); };
}

inline Decider threshold_decider(double threshold) {
  return [threshold](const DecisionContext& ctx) {
    return threshold_decide(ctx.contact.forecast_cloud_cover, threshold, ctx.delivered_so_far,
                            ctx.dv_init);
  };
}

inline Decider multi_threshold_decider(ThresholdConfig cfg) {
  validate(cfg);
  return [cfg = std::move(cfg)](const DecisionContext& ctx) {
    return multi_threshold_decide(ctx.contact.forecast_cloud_cover, ctx.dv_remaining,
                                  ctx.total_volume, cfg, ctx.delivered_so_far, ctx.dv_init);
  };
}

// ---------------------------------------------------------------------------
// Threshold tuning
// ---------------------------------------------------------------------------

struct TuningParams {
  int n_test_episodes = 500;     // nTe
  double threshold_step = 0.05;  // Tgr
  int n_threshold_values = 20;   // nTv
  double dr_tolerance = 0.02;    // DRtol
};

inline void validate(const TuningParams& p) {
  if (p.n_test_episodes < 1 || p.n_threshold_values < 1)
    throw std::invalid_argument("tuning: nTe and nTv must be positive");
  if (!(p.threshold_step > 0.0 && p.threshold_step <= 1.0))
    throw std::invalid_argument("tuning: Tgr must lie in (0,1]");
  if (!(p.dr_tolerance >= 0.0 && p.dr_tolerance < 1.0))
    throw std::invalid_argument("tuning: DRtol must lie in [0,1)");
}

struct TuningResult {
  double threshold = 1.0;
  bool degenerate = false;  // baseline delivered nothing; ratio undefined
  std::vector<std::pair<double, double>> trace;  // (T, mean Tsr / mean Bsr)
};

/// Produces the period for a tuning episode from its seed.
using ScenarioFn = std::function<DownlinkPeriod(std::uint64_t episode_seed)>;

/// Lowers T from 1.0 in steps of Tgr while the paired delivery-ratio ratio
/// (threshold vs CGR) stays above 1 - DRtol and returns the lowest T that
/// passed. Every T level is evaluated on the same episode seeds.
inline TuningResult tune_threshold(const ScenarioFn& scenario, const TuningParams& params,
                                   std::uint64_t seed) {
  validate(params);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(params.n_test_episodes));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = derive_seed(seed, i);
  std::vector<DownlinkPeriod> periods;
  periods.reserve(seeds.size());
  for (auto s : seeds) periods.push_back(scenario(s));

  double baseline = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    baseline += run_static_scheme(cgr_decider(), periods[i], seeds[i]).delivery_ratio;
  baseline /= static_cast<double>(seeds.size());

  TuningResult out;
  if (baseline <= 0.0) {
    out.degenerate = true;
    return out;
  }

  double t = 1.0;
  double last_pass = 1.0;
  for (int j = 0; j < params.n_threshold_values; ++j) {
    double tsr = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      tsr += run_static_scheme(threshold_decider(t), periods[i], seeds[i]).delivery_ratio;
    tsr /= static_cast<double>(seeds.size());
    const double ratio = tsr / baseline;
    out.trace.emplace_back(t, ratio);
    if (ratio > 1.0 - params.dr_tolerance) {
      last_pass = t;
      // Snap to the step grid so repeated subtraction does not drift.
      t = std::round((t - params.threshold_step) * 1e9) / 1e9;
      if (t < 0.0) break;
    } else {
      break;
    }
  }
  out.threshold = std::min(last_pass, 1.0);
  return out;
}

/// Tunes one threshold per remaining-data range by restricting the tuning
/// episodes to initial volumes inside that range (rejection sampling over
/// the scenario's own draws).
inline ThresholdConfig tune_multi_threshold(const ScenarioFn& scenario,
                                            const std::vector<double>& range_uppers,
                                            const TuningParams& params, std::uint64_t seed,
                                            int max_rejections = 10000) {
  ThresholdConfig cfg;
  double lo = 0.0;
  for (std::size_t r = 0; r < range_uppers.size(); ++r) {
    const double hi = range_uppers[r];
    const std::uint64_t range_seed = derive_seed(seed, 0x52414e47ULL + r);
    ScenarioFn in_range = [&, lo, hi](std::uint64_t s) {
      for (int attempt = 0; attempt < max_rejections; ++attempt) {
        auto p = scenario(derive_seed(s, static_cast<std::uint64_t>(attempt)));
        const double v = static_cast<double>(total_volume(p));
        const double f = v > 0 ? static_cast<double>(p.dv_init) / v : 0.0;
        if (f > lo && f <= hi) return p;
      }
      throw std::runtime_error("tune_multi_threshold: scenario never produced dv_init in range");
    };
    cfg.ranges.push_back({hi, tune_threshold(in_range, params, range_seed).threshold});
    lo = hi;
  }
  validate(cfg);
  return cfg;
}

// ---------------------------------------------------------------------------
// Static sorting
// ---------------------------------------------------------------------------

/// How a sorting planner charges the volume budget for a selected contact.
/// literal: initial plan charges v*cc, adaptive re-plans charge v.
/// expected_delivery: both charge the expected delivery v*(1-cc).
enum class SortBudgetRule { literal, expected_delivery };

inline SortBudgetRule parse_sort_budget_rule(std::string_view s) {
  if (s == "literal") return SortBudgetRule::literal;
  if (s == "expected_delivery") return SortBudgetRule::expected_delivery;
  throw std::invalid_argument("unknown sort_budget_rule '" + std::string(s) + "'");
}

inline std::string_view to_string(SortBudgetRule r) {
  return r == SortBudgetRule::literal ? "literal" : "expected_delivery";
}

/// Positions ordered by forecast cloud cover, ties by position.
inline std::vector<std::size_t> sort_by_forecast(const std::vector<Contact>& contacts,
                                                 std::size_t first = 0) {
  std::vector<std::size_t> order(contacts.size() - std::min(first, contacts.size()));
  std::iota(order.begin(), order.end(), first);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return contacts[a].forecast_cloud_cover < contacts[b].forecast_cloud_cover;
  });
  return order;
}

inline double initial_plan_charge(const Contact& c, SortBudgetRule rule) {
  const double v = static_cast<double>(c.volume);
  return rule == SortBudgetRule::literal ? v * c.forecast_cloud_cover
                                               : v * (1.0 - c.forecast_cloud_cover);
}

/// Greedy selection over contacts sorted by forecast cloud cover until the
/// budget dv_init * tau is spent; fully overcast contacts are never chosen.
inline DecisionMask static_sort_plan(std::int64_t dv_init, const std::vector<Contact>& contacts,
                                     double tau,
                                     SortBudgetRule rule = SortBudgetRule::literal) {
  if (!(tau > 0.0)) throw std::invalid_argument("volume margin tau must be > 0");
  DecisionMask x(contacts.size());
  double budget = static_cast<double>(dv_init) * tau;
  for (auto pos : sort_by_forecast(contacts)) {
    const auto& c = contacts[pos];
    if (budget > 0.0 && c.forecast_cloud_cover < 1.0) {
      x.set(pos);
      budget -= initial_plan_charge(c, rule);
    }
  }
  return x;
}

inline EpisodeResult run_static_sort(const DownlinkPeriod& period, double tau,
                                     std::uint64_t episode_seed,
                                     SortBudgetRule rule = SortBudgetRule::literal) {
  return run_static_scheme(static_sort_plan(period.dv_init, period.contacts, tau, rule), period,
                           episode_seed);
}

}  // namespace leosched
