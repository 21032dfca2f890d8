#pragma once

// Command-line front end. Verbs: run, tune, train, eval, oracle, contacts,
// bench. Exit status 0 on success, 1 for usage or validation errors, 2 for
// runtime failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "leosched/harness/bench.hpp"
#include "leosched/harness/experiment.hpp"
#include "leosched/harness/training.hpp"
#include "leosched/oracle.hpp"
#include "leosched/scenarios/case_study.hpp"
#include "leosched/scenarios/contact_plan.hpp"

namespace leosched {

namespace cli_detail {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string scenario;
  std::optional<int> workers;
};

inline void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON experiment config");
  sub->add_option("--seed", c.seed, "master seed (overrides config)");
  sub->add_option("--out-dir", c.out_dir, "directory for output files");
  sub->add_option("--scenario", c.scenario,
                  "uniform | variable:<dv>:<cc> | case-study:<profile>[:<dv>] | file:<path>");
}

inline ExperimentConfig load(const Common& c, bool require_config) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = load_experiment_config(c.config);
  else if (require_config) throw ConfigError("--config is required");
  if (c.seed) cfg.seed = *c.seed;
  if (!c.scenario.empty()) cfg.scenario = c.scenario;
  if (c.workers) cfg.workers = *c.workers;
  return cfg;
}

inline std::string out_path(const Common& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

/// Default comparison set for verbs that need schemes but got none.
inline std::vector<SchemeSpec> default_schemes() {
  std::vector<SchemeSpec> out;
  SchemeSpec cgr;
  cgr.name = "cgr";
  out.push_back(cgr);
  SchemeSpec thr;
  thr.name = "threshold";
  thr.kind = SchemeKind::threshold;
  thr.threshold = 0.7;
  out.push_back(thr);
  SchemeSpec ss;
  ss.name = "static_sort";
  ss.kind = SchemeKind::static_sort;
  out.push_back(ss);
  SchemeSpec as;
  as.name = "adaptive_sort";
  as.kind = SchemeKind::adaptive_sort;
  out.push_back(as);
  return out;
}

inline int cmd_run(const Common& c, std::optional<int> trials, std::optional<int> sets) {
  auto cfg = load(c, true);
  if (trials) cfg.trials = *trials;
  if (sets) cfg.sets = *sets;
  validate(cfg);
  const auto scenario = make_scenario(cfg);
  resolve_schemes(cfg, scenario);
  const auto result = run_batch(cfg, scenario);
  std::ostringstream raw, summary;
  write_raw_csv(raw, result.rows);
  write_summary_csv(summary, result.summary);
  write_text_file(out_path(c, "raw.csv"), raw.str());
  write_text_file(out_path(c, "summary.csv"), summary.str());
  write_text_file(out_path(c, "manifest.json"), manifest(cfg, result).dump(2) + "\n");
  std::cout << summary.str();
  return 0;
}

inline int cmd_tune(const Common& c, const std::vector<double>& uppers) {
  auto cfg = load(c, false);
  validate(cfg.tuning);
  const auto scenario = make_scenario(cfg);
  json out{{"scenario", cfg.scenario}, {"seed", cfg.seed}};
  if (uppers.empty()) {
    const auto r = tune_threshold(scenario, cfg.tuning, cfg.seed);
    json trace = json::array();
    for (const auto& [t, ratio] : r.trace) trace.push_back({{"T", t}, {"ratio", ratio}});
    out["threshold"] = r.threshold;
    out["degenerate"] = r.degenerate;
    out["trace"] = trace;
  } else {
    const auto m = tune_multi_threshold(scenario, uppers, cfg.tuning, cfg.seed);
    json ranges = json::array();
    for (const auto& r : m.ranges) ranges.push_back({{"upper", r.upper}, {"T", r.threshold}});
    out["ranges"] = ranges;
  }
  write_text_file(out_path(c, "tune.json"), out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

inline int cmd_train(const Common& c, const std::string& algorithm, std::optional<int> episodes,
                     const std::string& output) {
  auto cfg = load(c, false);
  json block = cfg.source.contains("train") ? cfg.source.at("train") : json::object();
  if (!algorithm.empty()) block["algorithm"] = algorithm;
  if (episodes) block["episodes"] = *episodes;
  const auto spec = parse_train_spec(block, cfg.reward);
  const auto scenario = make_scenario(cfg);
  const auto outcome = train_policy(spec, scenario, cfg.seed);
  const std::string fingerprint = block.dump() + "|" + cfg.scenario + "|" + std::to_string(cfg.seed);
  const std::string path = output.empty() ? out_path(c, "policy.json") : output;
  std::visit([&](const auto& p) { rl::write_json(path, rl::to_json(p, fingerprint)); },
             outcome.policy);
  std::ostringstream log;
  log << "episode,return,smoothed_return\n";
  const auto smooth = moving_average(outcome.episode_returns, 100);
  for (std::size_t i = 0; i < smooth.size(); ++i)
    log << i << ',' << fmt_num(outcome.episode_returns[i]) << ',' << fmt_num(smooth[i]) << '\n';
  write_text_file(out_path(c, "train_log.csv"), log.str());
  std::cout << "wrote " << path << " (" << outcome.episode_returns.size()
            << " episodes, final epsilon " << fmt_num(outcome.final_epsilon) << ")\n";
  return 0;
}

inline int cmd_eval(const Common& c, const std::string& policy_path, std::optional<int> episodes) {
  auto cfg = load(c, false);
  SchemeSpec s;
  s.name = "policy";
  s.kind = SchemeKind::policy;
  s.checkpoint = policy_path;
  cfg.schemes = {s};
  for (const auto& extra : default_schemes()) cfg.schemes.push_back(extra);
  if (episodes) {
    cfg.trials = *episodes;
    cfg.sets = 1;
  }
  validate(cfg);
  const auto scenario = make_scenario(cfg);
  resolve_schemes(cfg, scenario);
  const auto result = run_batch(cfg, scenario);
  std::ostringstream raw, summary;
  write_raw_csv(raw, result.rows);
  write_summary_csv(summary, result.summary);
  write_text_file(out_path(c, "eval_raw.csv"), raw.str());
  write_text_file(out_path(c, "eval_summary.csv"), summary.str());
  std::cout << summary.str();
  return 0;
}

inline int cmd_oracle(const Common& c, int instances, std::optional<int> n_contacts) {
  auto cfg = load(c, false);
  if (cfg.schemes.empty()) cfg.schemes = default_schemes();
  if (instances < 1) throw ConfigError("--instances must be >= 1");
  ScenarioFn scenario;
  if (n_contacts) {
    if (*n_contacts < 1) throw ConfigError("--n-contacts must be >= 1");
    if (static_cast<std::size_t>(*n_contacts) > kMaxEnumerationItems)
      throw ConfigError("oracle: brute force is limited to " +
                        std::to_string(kMaxEnumerationItems) + " contacts, got " +
                        std::to_string(*n_contacts));
    UniformScenarioConfig u;
    u.n_contacts = *n_contacts;
    scenario = uniform_scenario(u);
  } else {
    scenario = make_scenario(cfg);
  }
  resolve_schemes(cfg, scenario);
  std::ostringstream csv;
  csv << "instance,scheme,objective,optimum,gap\n";
  std::map<std::string, std::vector<double>> gaps;
  for (int i = 0; i < instances; ++i) {
    const std::uint64_t seed = episode_seed(cfg.seed, 0, i);
    const auto period = scenario(seed);
    const auto inst = expected_instance(period);
    if (inst.items.size() > kMaxEnumerationItems)
      throw ConfigError("oracle: brute force is limited to " +
                        std::to_string(kMaxEnumerationItems) + " contacts");
    const auto best = brute_force_optimal(inst);
    for (const auto& s : cfg.schemes) {
      const auto r = run_scheme(s, period, seed, cfg.reward);
      const double obj = soft_knapsack_objective(r.decisions, inst);
      gaps[s.name].push_back(best.value - obj);
      csv << i << ',' << s.name << ',' << fmt_num(obj) << ',' << fmt_num(best.value) << ','
          << fmt_num(best.value - obj) << '\n';
    }
  }
  write_text_file(out_path(c, "oracle.csv"), csv.str());
  std::ostringstream summary;
  summary << kSummaryHeader << '\n';
  std::vector<StatsRow> rows;
  for (const auto& s : cfg.schemes) rows.push_back({s.name, "optimality_gap", summarize(gaps[s.name])});
  write_summary_csv(summary, rows);
  write_text_file(out_path(c, "oracle_summary.csv"), summary.str());
  std::cout << summary.str();
  return 0;
}

inline int cmd_contacts(const Common& c, const std::string& profile_name, std::optional<int> days,
                        bool write_weather) {
  auto cfg = load(c, false);
  CaseStudyProfile profile = cfg.case_study ? *cfg.case_study : case_study_profile(profile_name);
  if (days) profile.days = *days;
  validate(profile);
  const auto data = build_case_study_data(profile);
  Rng rng(derive_seed(cfg.seed, kScenarioDomain));
  std::vector<Contact> contacts;
  std::ostringstream stations;
  stations << "index,station\n";
  for (std::size_t i = 0; i < data.contacts.size(); ++i) {
    const auto& tc = data.contacts[i];
    contacts.push_back({i, tc.cloud_cover, perturb_forecast(tc.cloud_cover, profile.forecast_noise_sd, rng),
                        tc.volume, tc.start, tc.end});
    stations << i << ',' << tc.station << '\n';
  }
  std::ostringstream plan;
  write_contact_plan(plan, contacts);
  write_text_file(out_path(c, "contacts_" + profile.name + ".csv"), plan.str());
  write_text_file(out_path(c, "contacts_" + profile.name + "_stations.csv"), stations.str());
  if (write_weather)
    for (const auto& [name, series] : data.weather) {
      std::ostringstream w;
      write_weather_csv(w, series);
      write_text_file(out_path(c, "weather_" + name + ".csv"), w.str());
    }
  std::cout << data.contacts.size() << " contacts for profile '" << profile.name << "' over "
            << profile.days << " days\n";
  return 0;
}

inline int cmd_bench(const Common& c, std::vector<std::size_t> grid, int reps) {
  if (grid.empty()) grid = {16, 32, 64, 128, 256, 512, 1024};
  const std::vector<std::pair<SchemeKind, std::string>> kinds{
      {SchemeKind::cgr, "cgr"},
      {SchemeKind::threshold, "threshold"},
      {SchemeKind::multi_threshold, "multi_threshold"},
      {SchemeKind::static_sort, "static_sort"},
      {SchemeKind::adaptive_sort, "adaptive_sort"}};
  std::ostringstream csv, slopes;
  csv << "scheme,n,seconds\n";
  slopes << "scheme,log_log_slope\n";
  for (const auto& [kind, name] : kinds) {
    const auto rows = scaling_benchmark(kind, name, grid, reps);
    for (const auto& r : rows) csv << r.scheme << ',' << r.n << ',' << r.seconds << '\n';
    slopes << name << ',' << fmt_num(log_log_slope(rows)) << '\n';
  }
  write_text_file(out_path(c, "bench.csv"), csv.str());
  write_text_file(out_path(c, "bench_slopes.csv"), slopes.str());
  std::cout << slopes.str();
  return 0;
}

}  // namespace cli_detail

inline int cli_main(int argc, char** argv) {
  using namespace cli_detail;
  CLI::App app{"leosched: energy-aware optical LEO downlink scheduling simulator"};
  app.require_subcommand(1);

  Common run_c, tune_c, train_c, eval_c, oracle_c, contacts_c, bench_c;
  std::optional<int> run_trials, run_sets, train_episodes, eval_episodes, oracle_n, contact_days;
  std::vector<double> tune_uppers;
  std::string train_algorithm, train_output, eval_policy, contacts_profile = "train";
  int oracle_instances = 100, bench_reps = 5;
  bool contacts_weather = false;
  std::vector<std::size_t> bench_grid;

  auto* run = app.add_subcommand("run", "batch experiment from a config");
  add_common(run, run_c);
  run->add_option("--workers", run_c.workers, "worker threads");
  run->add_option("--trials", run_trials, "trials per set (overrides config)");
  run->add_option("--sets", run_sets, "number of sets (overrides config)");

  auto* tune = app.add_subcommand("tune", "ground-side threshold tuning");
  add_common(tune, tune_c);
  tune->add_option("--uppers", tune_uppers, "range upper bounds for multi-threshold tuning");

  auto* train = app.add_subcommand("train", "train a Q-learning or DDQN policy");
  add_common(train, train_c);
  train->add_option("--algorithm", train_algorithm, "ddqn | qlearning");
  train->add_option("--episodes", train_episodes, "training episodes");
  train->add_option("--output", train_output, "checkpoint path (default <out-dir>/policy.json)");

  auto* eval = app.add_subcommand("eval", "evaluate a frozen policy against the heuristics");
  add_common(eval, eval_c);
  eval->add_option("--policy", eval_policy, "checkpoint path")->required();
  eval->add_option("--episodes", eval_episodes, "evaluation episodes");
  eval->add_option("--workers", eval_c.workers, "worker threads");

  auto* oracle = app.add_subcommand("oracle", "brute-force optimum and optimality gaps");
  add_common(oracle, oracle_c);
  oracle->add_option("--instances", oracle_instances, "number of random instances");
  oracle->add_option("--n-contacts", oracle_n, "contacts per instance (uniform scenario)");

  auto* contacts = app.add_subcommand("contacts", "generate case-study contacts");
  add_common(contacts, contacts_c);
  contacts->add_option("--profile", contacts_profile, "train | test");
  contacts->add_option("--days", contact_days, "window length in days");
  contacts->add_flag("--weather", contacts_weather, "also write the hourly weather series");

  auto* bench = app.add_subcommand("bench", "decision-logic scaling benchmark");
  add_common(bench, bench_c);
  bench->add_option("--grid", bench_grid, "contact counts");
  bench->add_option("--reps", bench_reps, "repetitions per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(run_c, run_trials, run_sets);
    if (*tune) return cmd_tune(tune_c, tune_uppers);
    if (*train) return cmd_train(train_c, train_algorithm, train_episodes, train_output);
    if (*eval) return cmd_eval(eval_c, eval_policy, eval_episodes);
    if (*oracle) return cmd_oracle(oracle_c, oracle_instances, oracle_n);
    if (*contacts) return cmd_contacts(contacts_c, contacts_profile, contact_days, contacts_weather);
    if (*bench) return cmd_bench(bench_c, bench_grid, bench_reps);
  } catch (const WeatherError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace leosched
