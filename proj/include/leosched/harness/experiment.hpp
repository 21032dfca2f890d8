#pragma once

// Experiment configuration (JSON), scheme dispatch and the batch runner.
//
// Episode seed for (set, trial) = derive(derive(master, set), trial). Every
// scheme in a batch sees the same period and channel stream for a given
// (set, trial), so scheme comparisons are paired.

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/harness/stats.hpp"
#include "leosched/metrics.hpp"
#include "leosched/rl/checkpoint.hpp"
#include "leosched/rl/policy.hpp"
#include "leosched/scenarios/registry.hpp"
#include "leosched/schemes_adaptive.hpp"
#include "leosched/schemes_static.hpp"

#ifndef LEOSCHED_VERSION
#define LEOSCHED_VERSION "0.1.0"
#endif
#ifndef LEOSCHED_GIT_DESCRIBE
#define LEOSCHED_GIT_DESCRIBE "unknown"
#endif

namespace leosched {

using json = nlohmann::json;

/// Raised for malformed configuration; the CLI maps it to exit status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SchemeKind { cgr, threshold, multi_threshold, static_sort, adaptive_sort, policy };

inline SchemeKind parse_scheme_kind(const std::string& s) {
  if (s == "cgr") return SchemeKind::cgr;
  if (s == "threshold") return SchemeKind::threshold;
  if (s == "multi_threshold") return SchemeKind::multi_threshold;
  if (s == "static_sort") return SchemeKind::static_sort;
  if (s == "adaptive_sort") return SchemeKind::adaptive_sort;
  if (s == "policy" || s == "ddqn" || s == "qlearning") return SchemeKind::policy;
  throw ConfigError("unknown scheme type '" + s + "'");
}

struct SchemeSpec {
  std::string name;
  SchemeKind kind = SchemeKind::cgr;
  double threshold = 1.0;
  bool tune = false;                 // tune thresholds before running
  std::vector<double> range_uppers;  // multi-threshold ranges when tuning
  ThresholdConfig multi;
  double tau = 1.0;
  SortBudgetRule rule = SortBudgetRule::literal;
  std::string checkpoint;
  std::shared_ptr<const rl::AnyPolicy> policy;
};

inline const rl::Policy& as_policy(const rl::AnyPolicy& p) {
  return std::visit([](const auto& x) -> const rl::Policy& { return x; }, p);
}

/// Runs one scheme on one period. Channel draws depend only on
/// (episode_seed, contact index).
inline EpisodeResult run_scheme(const SchemeSpec& s, const DownlinkPeriod& period,
                                std::uint64_t episode_seed, const rl::RewardParams& reward) {
  switch (s.kind) {
    case SchemeKind::cgr:
      return run_static_scheme(cgr_decider(), period, episode_seed);
    case SchemeKind::threshold:
      return run_static_scheme(threshold_decider(s.threshold), period, episode_seed);
    case SchemeKind::multi_threshold:
      return run_static_scheme(multi_threshold_decider(s.multi), period, episode_seed);
    case SchemeKind::static_sort:
      return run_static_sort(period, s.tau, episode_seed, s.rule);
    case SchemeKind::adaptive_sort:
      return adaptive_sort_run(period, s.tau, episode_seed, s.rule);
    case SchemeKind::policy:
      if (!s.policy) throw std::logic_error("scheme '" + s.name + "': policy not loaded");
      return rl::run_policy(as_policy(*s.policy), period, reward, episode_seed);
  }
  throw std::logic_error("unreachable scheme kind");
}

struct ExperimentConfig {
  std::string scenario = "uniform";
  std::optional<CaseStudyProfile> case_study;  // overrides the named profile
  std::vector<SchemeSpec> schemes;
  int trials = 100;
  int sets = 3;
  std::uint64_t seed = 1;
  int workers = 1;
  double w = 0.5;
  TuningParams tuning;
  rl::RewardParams reward;
  json source = json::object();  // verbatim config, echoed in the manifest
};

inline void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.sets < 1) throw ConfigError("sets must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(c.w >= 0.0 && c.w <= 1.0)) throw ConfigError("w must lie in [0,1]");
  if (c.schemes.empty()) throw ConfigError("no schemes configured");
  std::set<std::string> names;
  for (const auto& s : c.schemes) {
    if (!names.insert(s.name).second) throw ConfigError("duplicate scheme name '" + s.name + "'");
    if ((s.kind == SchemeKind::static_sort || s.kind == SchemeKind::adaptive_sort) && !(s.tau > 0.0))
      throw ConfigError("scheme '" + s.name + "': tau must be > 0");
    if (s.kind == SchemeKind::threshold && !s.tune && !(s.threshold >= 0.0 && s.threshold <= 1.0))
      throw ConfigError("scheme '" + s.name + "': threshold outside [0,1]");
    if (s.kind == SchemeKind::policy && s.checkpoint.empty() && !s.policy)
      throw ConfigError("scheme '" + s.name + "': checkpoint path required");
  }
  try {
    validate(c.tuning);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline SchemeSpec parse_scheme(const json& j, double default_tau) {
  detail::reject_unknown_keys(j,
                              {"name", "type", "T", "tune", "uppers", "thresholds", "tau",
                               "budget_rule", "checkpoint"},
                              "scheme");
  SchemeSpec s;
  if (!j.contains("type")) throw ConfigError("scheme without 'type'");
  const auto type = detail::get_or<std::string>(j, "type", "");
  s.kind = parse_scheme_kind(type);
  s.name = detail::get_or<std::string>(j, "name", type);
  s.tau = detail::get_or<double>(j, "tau", default_tau);
  try {
    s.rule = parse_sort_budget_rule(detail::get_or<std::string>(j, "budget_rule", "literal"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.tune = detail::get_or<bool>(j, "tune", false);
  s.checkpoint = detail::get_or<std::string>(j, "checkpoint", "");
  if (s.kind == SchemeKind::threshold) {
    if (!s.tune && !j.contains("T")) throw ConfigError("threshold scheme needs 'T' or 'tune'");
    s.threshold = detail::get_or<double>(j, "T", 1.0);
  }
  if (s.kind == SchemeKind::multi_threshold) {
    s.range_uppers = detail::get_or<std::vector<double>>(j, "uppers", {0.2, 0.4, 0.6, 0.8, 1.0});
    if (!s.tune) {
      if (!j.contains("thresholds")) throw ConfigError("multi_threshold needs 'thresholds' or 'tune'");
      const auto t = detail::get_or<std::vector<double>>(j, "thresholds", {});
      if (t.size() != s.range_uppers.size())
        throw ConfigError("multi_threshold: thresholds and uppers differ in length");
      for (std::size_t i = 0; i < t.size(); ++i) s.multi.ranges.push_back({s.range_uppers[i], t[i]});
      try {
        validate(s.multi);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  return s;
}

inline CaseStudyProfile parse_case_study(const json& j) {
  detail::reject_unknown_keys(j,
                              {"profile", "days", "step_s", "packet_rate", "forecast_noise_sd",
                               "weather_seed", "weather_csv"},
                              "case_study");
  CaseStudyProfile p;
  try {
    p = case_study_profile(detail::get_or<std::string>(j, "profile", "train"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.days = detail::get_or<int>(j, "days", p.days);
  p.step_s = detail::get_or<double>(j, "step_s", p.step_s);
  p.packet_rate = detail::get_or<double>(j, "packet_rate", p.packet_rate);
  p.forecast_noise_sd = detail::get_or<double>(j, "forecast_noise_sd", p.forecast_noise_sd);
  p.weather_seed = detail::get_or<std::uint64_t>(j, "weather_seed", p.weather_seed);
  if (j.contains("weather_csv")) {
    for (const auto& [station, path] : j.at("weather_csv").items()) {
      bool found = false;
      for (auto& sw : p.stations)
        if (sw.station.name == station) {
          sw.csv_path = path.get<std::string>();
          found = true;
        }
      if (!found) throw ConfigError("weather_csv: no station '" + station + "' in profile");
    }
  }
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

inline ExperimentConfig parse_experiment_config(const json& j) {
  detail::reject_unknown_keys(j,
                              {"scenario", "case_study", "schemes", "trials", "sets", "seed",
                               "workers", "w", "nTe", "Tgr", "nTv", "DRtol", "tau", "reward_c",
                               "train", "bench", "oracle", "comment"},
                              "config");
  ExperimentConfig c;
  c.source = j;
  c.scenario = detail::get_or<std::string>(j, "scenario", c.scenario);
  if (j.contains("case_study")) c.case_study = parse_case_study(j.at("case_study"));
  c.trials = detail::get_or<int>(j, "trials", c.trials);
  c.sets = detail::get_or<int>(j, "sets", c.sets);
  c.seed = detail::get_or<std::uint64_t>(j, "seed", c.seed);
  c.workers = detail::get_or<int>(j, "workers", c.workers);
  c.w = detail::get_or<double>(j, "w", c.w);
  c.tuning.n_test_episodes = detail::get_or<int>(j, "nTe", c.tuning.n_test_episodes);
  c.tuning.threshold_step = detail::get_or<double>(j, "Tgr", c.tuning.threshold_step);
  c.tuning.n_threshold_values = detail::get_or<int>(j, "nTv", c.tuning.n_threshold_values);
  c.tuning.dr_tolerance = detail::get_or<double>(j, "DRtol", c.tuning.dr_tolerance);
  c.reward.c = detail::get_or<double>(j, "reward_c", c.reward.c);
  const double tau = detail::get_or<double>(j, "tau", 1.0);
  if (j.contains("schemes")) {
    if (!j.at("schemes").is_array()) throw ConfigError("'schemes' must be an array");
    for (const auto& s : j.at("schemes")) c.schemes.push_back(parse_scheme(s, tau));
  }
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

inline ScenarioFn make_scenario(const ExperimentConfig& c) {
  try {
    return parse_scenario(c.scenario, c.case_study);
  } catch (const WeatherError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Tunes thresholds and loads checkpoints so every scheme is runnable.
inline void resolve_schemes(ExperimentConfig& c, const ScenarioFn& scenario) {
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    auto& s = c.schemes[i];
    const std::uint64_t tune_seed = derive_seed(c.seed, 0x54554e45ULL + i);  // "TUNE"
    if (s.kind == SchemeKind::threshold && s.tune)
      s.threshold = tune_threshold(scenario, c.tuning, tune_seed).threshold;
    if (s.kind == SchemeKind::multi_threshold && s.tune)
      s.multi = tune_multi_threshold(scenario, s.range_uppers, c.tuning, tune_seed);
    if (s.kind == SchemeKind::policy && !s.policy)
      s.policy = std::make_shared<const rl::AnyPolicy>(rl::load_policy(s.checkpoint));
  }
}

inline std::uint64_t episode_seed(std::uint64_t master, int set, int trial) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(set)),
                     static_cast<std::uint64_t>(trial));
}

struct BatchRow {
  std::string scheme;
  int set = 0;
  int trial = 0;
  EpisodeResult result;
};

struct BatchResult {
  std::vector<BatchRow> rows;  // scheme-major, then set, then trial
  std::vector<StatsRow> summary;
};

/// Runs `count` independent jobs on a bounded pool. The first exception is
/// rethrown after all workers stop.
template <class Job>
void parallel_for(std::size_t count, int workers, Job&& job) {
  const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
  if (n_threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(n_threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<StatsRow> summarize_rows(const std::vector<BatchRow>& rows,
                                            const std::vector<SchemeSpec>& schemes, double w) {
  std::vector<StatsRow> out;
  for (const auto& s : schemes) {
    std::vector<double> dr, eff, e, obj;
    for (const auto& r : rows) {
      if (r.scheme != s.name) continue;
      dr.push_back(r.result.delivery_ratio);
      eff.push_back(r.result.mean_contact_efficiency);
      e.push_back(r.result.total_excess_energy);
      obj.push_back(weighted_objective(r.result, w));
    }
    if (dr.empty()) continue;
    out.push_back({s.name, "delivery_ratio", summarize(dr)});
    out.push_back({s.name, "mean_contact_efficiency", summarize(eff)});
    out.push_back({s.name, "total_excess_energy", summarize(e)});
    out.push_back({s.name, "weighted_objective", summarize(obj)});
  }
  return out;
}

/// Schemes must already be resolved (see resolve_schemes).
inline BatchResult run_batch(const ExperimentConfig& c, const ScenarioFn& scenario) {
  validate(c);
  const auto n_schemes = c.schemes.size();
  const auto n_trials = static_cast<std::size_t>(c.trials);
  const std::size_t jobs = static_cast<std::size_t>(c.sets) * n_trials;
  std::vector<BatchRow> rows(n_schemes * jobs);
  parallel_for(jobs, c.workers, [&](std::size_t job) {
    const int set = static_cast<int>(job / n_trials);
    const int trial = static_cast<int>(job % n_trials);
    const std::uint64_t seed = episode_seed(c.seed, set, trial);
    const DownlinkPeriod period = scenario(seed);
    for (std::size_t k = 0; k < n_schemes; ++k)
      rows[k * jobs + job] = {c.schemes[k].name, set, trial,
                              run_scheme(c.schemes[k], period, seed, c.reward)};
  });
  BatchResult out;
  out.summary = summarize_rows(rows, c.schemes, c.w);
  out.rows = std::move(rows);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization. Headers are versioned by their column list; numbers use a
// fixed printf format so output is byte-stable.
// ---------------------------------------------------------------------------

inline std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline constexpr const char* kRawHeader = "scheme,set,trial,seed,dv_init,V,DR,E,mean_eff,return";
inline constexpr const char* kSummaryHeader = "scheme,metric,mean,median,uq,lq,sd,n";

inline void write_raw_csv(std::ostream& out, const std::vector<BatchRow>& rows) {
  out << kRawHeader << '\n';
  for (const auto& r : rows) {
    const auto& e = r.result;
    out << r.scheme << ',' << r.set << ',' << r.trial << ',' << e.seed << ',' << e.dv_init << ','
        << e.total_volume << ',' << fmt_num(e.delivery_ratio) << ','
        << fmt_num(e.total_excess_energy) << ',' << fmt_num(e.mean_contact_efficiency) << ','
        << (e.rl_return ? fmt_num(*e.rl_return) : "") << '\n';
  }
}

inline void write_summary_csv(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.stats;
    out << r.scheme << ',' << r.metric << ',' << fmt_num(s.mean) << ',' << fmt_num(s.median) << ','
        << fmt_num(s.uq) << ',' << fmt_num(s.lq) << ',' << fmt_num(s.sd) << ',' << s.n << '\n';
  }
}

inline json scheme_to_json(const SchemeSpec& s) {
  json j{{"name", s.name}};
  switch (s.kind) {
    case SchemeKind::cgr: j["type"] = "cgr"; break;
    case SchemeKind::threshold:
      j["type"] = "threshold";
      j["T"] = s.threshold;
      break;
    case SchemeKind::multi_threshold: {
      j["type"] = "multi_threshold";
      json ranges = json::array();
      for (const auto& r : s.multi.ranges) ranges.push_back({{"upper", r.upper}, {"T", r.threshold}});
      j["ranges"] = ranges;
      break;
    }
    case SchemeKind::static_sort:
    case SchemeKind::adaptive_sort:
      j["type"] = s.kind == SchemeKind::static_sort ? "static_sort" : "adaptive_sort";
      j["tau"] = s.tau;
      j["budget_rule"] = std::string(to_string(s.rule));
      break;
    case SchemeKind::policy:
      j["type"] = "policy";
      j["checkpoint"] = s.checkpoint;
      break;
  }
  return j;
}

/// Worker count is deliberately omitted so manifests match across pool sizes.
inline json manifest(const ExperimentConfig& c, const BatchResult& r) {
  json schemes = json::array();
  for (const auto& s : c.schemes) schemes.push_back(scheme_to_json(s));
  json source = c.source;
  source.erase("workers");
  return {{"tool", "leosched"},
          {"version", LEOSCHED_VERSION},
          {"build", LEOSCHED_GIT_DESCRIBE},
          {"config", source},
          {"resolved_schemes", schemes},
          {"scenario", c.scenario},
          {"master_seed", c.seed},
          {"sets", c.sets},
          {"trials", c.trials},
          {"rows", r.rows.size()},
          {"raw_csv_header", kRawHeader},
          {"summary_csv_header", kSummaryHeader}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace leosched
