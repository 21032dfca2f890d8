#pragma once

// Action selection shared by the tabular and neural learners, plus the
// greedy evaluation loop that turns a frozen policy into a scheme.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "leosched/core.hpp"
#include "leosched/rl/env.hpp"

namespace leosched::rl {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::array<double, 2> q_values(const Observation& obs) const = 0;
};

/// Argmax with ties going to action 0.
inline int greedy_action(const std::array<double, 2>& q) { return q[1] > q[0] ? 1 : 0; }

/// Epsilon-greedy: uniform random action with probability eps, otherwise greedy.
inline int policy_act(const Policy& policy, const Observation& obs, double eps, Rng& rng) {
  if (eps > 0.0 && uniform01(rng) < eps) return uniform01(rng) < 0.5 ? 0 : 1;
  return greedy_action(policy.q_values(obs));
}

/// Exploration schedule stepped once per environment step.
struct EpsilonSchedule {
  enum class Shape { multiplicative, linear };
  double initial = 1.0;
  double minimum = 0.01;
  double decay = 6.37e-6;
  Shape shape = Shape::multiplicative;

  double next(double eps) const {
    const double e = shape == Shape::multiplicative ? eps * (1.0 - decay) : eps - decay;
    return e < minimum ? minimum : e;
  }
};

inline EpsilonSchedule::Shape parse_epsilon_shape(std::string_view s) {
  if (s == "multiplicative") return EpsilonSchedule::Shape::multiplicative;
  if (s == "linear") return EpsilonSchedule::Shape::linear;
  throw std::invalid_argument("unknown epsilon schedule shape");
}

/// Runs one episode greedily (eps = 0) and returns the metrics with the
/// episode return attached.
inline EpisodeResult run_policy(const Policy& policy, const DownlinkPeriod& period,
                                const RewardParams& reward, std::uint64_t episode_seed) {
  DownlinkEnv env(period, reward, episode_seed);
  Observation obs = env.reset();
  while (!env.done()) obs = env.step(greedy_action(policy.q_values(obs))).observation;
  return env.result();
}

/// Uniform random actions, for baselines.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::array<double, 2> q_values(const Observation&) const override {
    return uniform01(rng_) < 0.5 ? std::array<double, 2>{1.0, 0.0}
                                 : std::array<double, 2>{0.0, 1.0};
  }

 private:
  mutable Rng rng_;
};

}  // namespace leosched::rl
