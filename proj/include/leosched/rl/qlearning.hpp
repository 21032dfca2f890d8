#pragma once

// Tabular Q-learning over a discretised observation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/rl/env.hpp"
#include "leosched/rl/policy.hpp"

namespace leosched::rl {

inline constexpr std::size_t kDiscreteDims = 5;
using BinTuple = std::array<int, kDiscreteDims>;

inline int bin_of(double x, int bins) {
  const int b = static_cast<int>(std::floor(x * bins));
  return std::clamp(b, 0, bins - 1);
}

/// (cc_next, dv, cvr, mean forecast cc of contacts not yet passed,
/// fraction of contacts not yet passed), each uniformly binned on [0, 1].
/// With no contacts left both summary scalars are 0.
inline BinTuple discretize_observation(const Observation& obs, int bins) {
  if (bins < 2) throw std::invalid_argument("discretisation needs at least 2 bins");
  const std::size_t n = obs.sgc.size();
  double mean_cc = 0.0;
  double remaining = 0.0;
  if (n > 0 && obs.next < n) {
    double sum = 0.0;
    for (std::size_t i = obs.next; i < n; ++i) sum += obs.sgc[i].cc;
    const auto left = static_cast<double>(n - obs.next);
    mean_cc = sum / left;
    remaining = left / static_cast<double>(n);
  }
  return {bin_of(obs.cc_next, bins), bin_of(obs.dv, bins), bin_of(obs.cvr, bins),
          bin_of(mean_cc, bins), bin_of(remaining, bins)};
}

class QTable final : public Policy {
 public:
  QTable() = default;
  explicit QTable(int bins) : bins_(bins) {
    if (bins < 2) throw std::invalid_argument("QTable needs at least 2 bins");
    std::size_t states = 1;
    for (std::size_t d = 0; d < kDiscreteDims; ++d) states *= static_cast<std::size_t>(bins);
    values_.assign(states * 2, 0.0);
  }

  int bins() const { return bins_; }
  std::size_t state_count() const { return values_.size() / 2; }

  std::size_t state_index(const BinTuple& t) const {
    std::size_t idx = 0;
    for (int b : t) idx = idx * static_cast<std::size_t>(bins_) + static_cast<std::size_t>(b);
    return idx;
  }

  BinTuple bins_of(std::size_t state) const {
    BinTuple t{};
    for (std::size_t d = kDiscreteDims; d-- > 0;) {
      t[d] = static_cast<int>(state % static_cast<std::size_t>(bins_));
      state /= static_cast<std::size_t>(bins_);
    }
    return t;
  }

  double& at(std::size_t state, int action) { return values_[state * 2 + action]; }
  double at(std::size_t state, int action) const { return values_[state * 2 + action]; }

  std::array<double, 2> q_values(const Observation& obs) const override {
    const auto s = state_index(discretize_observation(obs, bins_));
    return {at(s, 0), at(s, 1)};
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  int bins_ = 10;
  std::vector<double> values_;
};

struct QLearningHyper {
  double alpha = 0.00001;
  double gamma = 0.99;
  EpsilonSchedule epsilon{1.0, 0.005, 0.00001, EpsilonSchedule::Shape::multiplicative};
  int bins = 10;
  RewardParams reward{};
};

using EnvFactory = std::function<DownlinkPeriod(std::uint64_t episode_seed)>;

struct TrainingLog {
  std::vector<double> episode_returns;
  double final_epsilon = 1.0;
};

inline QTable q_learning_train(const EnvFactory& make_period, const QLearningHyper& hyper,
                               int episodes, std::uint64_t seed, TrainingLog* log = nullptr) {
  QTable q(hyper.bins);
  Rng rng(derive_seed(seed, kPolicyDomain));
  double eps = hyper.epsilon.initial;
  for (int ep = 0; ep < episodes; ++ep) {
    const std::uint64_t ep_seed = derive_seed(seed, static_cast<std::uint64_t>(ep));
    DownlinkEnv env(make_period(ep_seed), hyper.reward, ep_seed);
    Observation obs = env.reset();
    while (!env.done()) {
      const int a = policy_act(q, obs, eps, rng);
      const auto s = q.state_index(discretize_observation(obs, hyper.bins));
      auto out = env.step(a);
      double target = out.reward;
      if (!out.done) {
        const auto s2 = q.state_index(discretize_observation(out.observation, hyper.bins));
        target += hyper.gamma * std::max(q.at(s2, 0), q.at(s2, 1));
      }
      q.at(s, a) += hyper.alpha * (target - q.at(s, a));
      obs = std::move(out.observation);
      eps = hyper.epsilon.next(eps);
    }
    if (log) log->episode_returns.push_back(env.episode_return());
  }
  if (log) log->final_epsilon = eps;
  return q;
}

}  // namespace leosched::rl
