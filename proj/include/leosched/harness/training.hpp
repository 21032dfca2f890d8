#pragma once

// The "train" block of an experiment config and the dispatch to the
// tabular or neural learner.

#include <json.hpp>

#include <string>
#include <vector>

#include "leosched/harness/experiment.hpp"
#include "leosched/rl/checkpoint.hpp"
#include "leosched/rl/ddqn.hpp"
#include "leosched/rl/qlearning.hpp"

namespace leosched {

struct TrainSpec {
  std::string algorithm = "ddqn";  // ddqn | qlearning
  int episodes = 20000;
  std::size_t n_contacts = 10;
  rl::DdqnHyper ddqn;
  rl::QLearningHyper qlearning;
};

inline TrainSpec parse_train_spec(const json& j, const rl::RewardParams& reward) {
  detail::reject_unknown_keys(
      j,
      {"algorithm", "episodes", "n_contacts", "profile", "alpha", "gamma", "epsilon_initial",
       "epsilon_min", "epsilon_decay", "epsilon_shape", "minibatch", "replay_capacity", "l2",
       "target_smooth", "target_update_frequency", "hidden", "grad_clip", "bins"},
      "train");
  TrainSpec t;
  t.algorithm = detail::get_or<std::string>(j, "algorithm", t.algorithm);
  if (t.algorithm != "ddqn" && t.algorithm != "qlearning")
    throw ConfigError("train.algorithm must be ddqn or qlearning");
  t.episodes = detail::get_or<int>(j, "episodes", t.episodes);
  if (t.episodes < 1) throw ConfigError("train.episodes must be >= 1");
  t.n_contacts = detail::get_or<std::size_t>(j, "n_contacts", t.n_contacts);

  const auto profile = detail::get_or<std::string>(j, "profile", "general");
  if (profile == "general") t.ddqn = rl::DdqnHyper::general();
  else if (profile == "case_study") t.ddqn = rl::DdqnHyper::case_study();
  else throw ConfigError("train.profile must be general or case_study");

  auto& d = t.ddqn;
  d.reward = reward;
  d.alpha = detail::get_or<double>(j, "alpha", d.alpha);
  d.gamma = detail::get_or<double>(j, "gamma", d.gamma);
  d.epsilon.initial = detail::get_or<double>(j, "epsilon_initial", d.epsilon.initial);
  d.epsilon.minimum = detail::get_or<double>(j, "epsilon_min", d.epsilon.minimum);
  d.epsilon.decay = detail::get_or<double>(j, "epsilon_decay", d.epsilon.decay);
  d.minibatch = detail::get_or<int>(j, "minibatch", d.minibatch);
  d.replay_capacity = detail::get_or<std::size_t>(j, "replay_capacity", d.replay_capacity);
  d.l2 = detail::get_or<double>(j, "l2", d.l2);
  d.target_smooth = detail::get_or<double>(j, "target_smooth", d.target_smooth);
  d.target_update_frequency =
      detail::get_or<int>(j, "target_update_frequency", d.target_update_frequency);
  d.hidden = detail::get_or<int>(j, "hidden", d.hidden);
  d.grad_clip = detail::get_or<double>(j, "grad_clip", d.grad_clip);

  auto& q = t.qlearning;
  q.reward = reward;
  q.alpha = detail::get_or<double>(j, "alpha", q.alpha);
  q.gamma = detail::get_or<double>(j, "gamma", q.gamma);
  q.epsilon.initial = detail::get_or<double>(j, "epsilon_initial", q.epsilon.initial);
  q.epsilon.minimum = detail::get_or<double>(j, "epsilon_min", q.epsilon.minimum);
  q.epsilon.decay = detail::get_or<double>(j, "epsilon_decay", q.epsilon.decay);
  q.bins = detail::get_or<int>(j, "bins", q.bins);

  try {
    const auto shape = rl::parse_epsilon_shape(detail::get_or<std::string>(j, "epsilon_shape", "multiplicative"));
    d.epsilon.shape = shape;
    q.epsilon.shape = shape;
    if (t.algorithm == "ddqn") rl::validate(d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  if (q.bins < 2) throw ConfigError("train.bins must be >= 2");
  return t;
}

struct TrainOutcome {
  rl::AnyPolicy policy;
  std::vector<double> episode_returns;
  double final_epsilon = 0.0;
};

inline TrainOutcome train_policy(const TrainSpec& t, const ScenarioFn& scenario,
                                 std::uint64_t seed) {
  if (t.algorithm == "qlearning") {
    rl::TrainingLog log;
    auto q = rl::q_learning_train(scenario, t.qlearning, t.episodes, seed, &log);
    return {std::move(q), std::move(log.episode_returns), log.final_epsilon};
  }
  rl::DdqnLog log;
  auto p = rl::ddqn_train(scenario, t.n_contacts, t.ddqn, t.episodes, seed, &log);
  return {std::move(p), std::move(log.episode_returns), log.final_epsilon};
}

/// Trailing moving average with the given window (shorter at the start).
inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t window) {
  std::vector<double> out(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += x[i];
    if (i >= window) sum -= x[i - window];
    out[i] = sum / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

}  // namespace leosched
