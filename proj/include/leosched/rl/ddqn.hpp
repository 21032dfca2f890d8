#pragma once

// Double deep Q-network training: epsilon-greedy collection into a ring
// replay buffer, minibatch SGD on the squared TD error, and a soft-updated
// target network that evaluates the online network's argmax.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leosched/core.hpp"
#include "leosched/rl/env.hpp"
#include "leosched/rl/mlp.hpp"
#include "leosched/rl/policy.hpp"
#include "leosched/rl/qlearning.hpp"

namespace leosched::rl {

struct DdqnHyper {
  double alpha = 0.001782;
  std::size_t replay_capacity = 8656429;
  double gamma = 0.99;
  EpsilonSchedule epsilon{1.0, 0.01, 6.37e-6, EpsilonSchedule::Shape::multiplicative};
  int minibatch = 75;
  int target_update_frequency = 1;
  double l2 = 1e-9;
  double target_smooth = 0.02028;
  int lookahead_steps = 1;
  int hidden = 64;
  double grad_clip = 0.0;  // max global gradient norm, 0 disables
  RewardParams reward{};

  /// Defaults for the synthetic (uniform) scenarios.
  static DdqnHyper general() { return {}; }

  /// Defaults for the case-study scenarios.
  static DdqnHyper case_study() {
    DdqnHyper h;
    h.alpha = 0.01;
    h.replay_capacity = 10000;
    h.epsilon.decay = 0.005;
    h.minibatch = 64;
    h.l2 = 1e-4;
    h.target_smooth = 1e-3;
    return h;
  }
};

inline void validate(const DdqnHyper& h) {
  if (!(h.gamma >= 0.0 && h.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
  if (!(h.epsilon.minimum <= h.epsilon.initial && h.epsilon.initial <= 1.0))
    throw std::invalid_argument("epsilon bounds must satisfy min <= init <= 1");
  if (h.minibatch < 1 || h.target_update_frequency < 1 || h.hidden < 1)
    throw std::invalid_argument("minibatch, target update frequency and hidden must be positive");
  if (h.replay_capacity < static_cast<std::size_t>(h.minibatch))
    throw std::invalid_argument("replay capacity smaller than minibatch");
  if (h.lookahead_steps != 1) throw std::invalid_argument("only 1-step TD targets are supported");
  if (!(h.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
}

/// Fixed-width transitions in a ring. Storage grows on demand up to capacity.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim) : capacity_(capacity), dim_(obs_dim) {}

  void push(const std::vector<double>& s, int a, double r, const std::vector<double>& s2,
            bool done) {
    if (size_ < capacity_) {
      states_.insert(states_.end(), s.begin(), s.end());
      next_.insert(next_.end(), s2.begin(), s2.end());
      actions_.push_back(a);
      rewards_.push_back(r);
      dones_.push_back(done ? 1 : 0);
      ++size_;
    } else {
      std::copy(s.begin(), s.end(), states_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
      std::copy(s2.begin(), s2.end(), next_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
      actions_[head_] = a;
      rewards_[head_] = r;
      dones_[head_] = done ? 1 : 0;
    }
    head_ = (head_ + 1) % capacity_;
  }

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  const double* state(std::size_t i) const { return states_.data() + i * dim_; }
  const double* next_state(std::size_t i) const { return next_.data() + i * dim_; }
  int action(std::size_t i) const { return actions_[i]; }
  double reward(std::size_t i) const { return rewards_[i]; }
  bool done(std::size_t i) const { return dones_[i] != 0; }

 private:
  std::size_t capacity_;
  std::size_t dim_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<double> states_, next_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

/// y = r + gamma * Q_target(s', argmax_a Q_online(s', a)) for non-terminal
/// transitions, y = r otherwise. Columns of `next_states` are samples.
inline Vector double_q_targets(const MlpPolicy& online, const MlpPolicy& target,
                               const Matrix& next_states, const Vector& rewards,
                               const std::vector<bool>& done, double gamma) {
  const Matrix q_online = online.forward_batch(next_states).back();
  const Matrix q_target = target.forward_batch(next_states).back();
  Vector y = rewards;
  for (Eigen::Index j = 0; j < next_states.cols(); ++j) {
    if (done[static_cast<std::size_t>(j)]) continue;
    const int a_star = q_online(1, j) > q_online(0, j) ? 1 : 0;
    y(j) += gamma * q_target(a_star, j);
  }
  return y;
}

struct DdqnLog {
  std::vector<double> episode_returns;
  std::vector<double> episode_delivery_ratio;
  std::size_t updates = 0;
  double final_epsilon = 1.0;
};

class DdqnTrainer {
 public:
  DdqnTrainer(std::size_t n_contacts, DdqnHyper hyper, std::uint64_t seed)
      : hyper_(hyper),
        online_(MlpPolicy::for_contacts(n_contacts, hyper.hidden)),
        buffer_(hyper.replay_capacity, 3 + 2 * n_contacts),
        rng_(derive_seed(seed, kPolicyDomain)),
        seed_(seed),
        eps_(hyper.epsilon.initial) {
    validate(hyper_);
    online_.randomize(rng_);
    target_ = online_;
  }

  /// Runs `episodes` more training episodes. Episode numbering continues
  /// across calls so split training is identical to one long run.
  void train(const EnvFactory& make_period, int episodes, DdqnLog* log = nullptr) {
    for (int e = 0; e < episodes; ++e, ++episode_) {
      const std::uint64_t ep_seed = derive_seed(seed_, static_cast<std::uint64_t>(episode_));
      DownlinkEnv env(make_period(ep_seed), hyper_.reward, ep_seed);
      if (3 + 2 * env.period().size() != static_cast<std::size_t>(online_.input_dim()))
        throw std::invalid_argument("DDQN: period size differs from network input");
      Observation obs = env.reset();
      std::vector<double> s = obs.flatten();
      while (!env.done()) {
        const int a = policy_act(online_, obs, eps_, rng_);
        auto out = env.step(a);
        std::vector<double> s2 = out.observation.flatten();
        buffer_.push(s, a, out.reward, s2, out.done);
        if (buffer_.size() >= static_cast<std::size_t>(hyper_.minibatch)) learn();
        eps_ = hyper_.epsilon.next(eps_);
        obs = std::move(out.observation);
        s = std::move(s2);
      }
      if (log) {
        log->episode_returns.push_back(env.episode_return());
        log->episode_delivery_ratio.push_back(env.result().delivery_ratio);
      }
    }
    if (log) {
      log->updates = updates_;
      log->final_epsilon = eps_;
    }
  }

  const MlpPolicy& online() const { return online_; }
  const MlpPolicy& target() const { return target_; }
  double epsilon() const { return eps_; }

 private:
  void learn() {
    const auto batch = static_cast<Eigen::Index>(hyper_.minibatch);
    const auto dim = static_cast<Eigen::Index>(buffer_.dim());
    Matrix states(dim, batch), next(dim, batch);
    Vector rewards(batch);
    std::vector<bool> done(static_cast<std::size_t>(batch));
    std::vector<int> actions(static_cast<std::size_t>(batch));
    for (Eigen::Index j = 0; j < batch; ++j) {
      const auto i = static_cast<std::size_t>(rng_() % buffer_.size());
      states.col(j) = Eigen::Map<const Vector>(buffer_.state(i), dim);
      next.col(j) = Eigen::Map<const Vector>(buffer_.next_state(i), dim);
      rewards(j) = buffer_.reward(i);
      done[static_cast<std::size_t>(j)] = buffer_.done(i);
      actions[static_cast<std::size_t>(j)] = buffer_.action(i);
    }
    const Vector y = double_q_targets(online_, target_, next, rewards, done, hyper_.gamma);

    // Loss = mean over the batch of 0.5 * (Q(s, a) - y)^2.
    const auto acts = online_.forward_batch(states);
    Matrix d_out = Matrix::Zero(2, batch);
    for (Eigen::Index j = 0; j < batch; ++j) {
      const int a = actions[static_cast<std::size_t>(j)];
      d_out(a, j) = (acts.back()(a, j) - y(j)) / static_cast<double>(batch);
    }
    auto grads = online_.backward(acts, d_out);
    if (hyper_.grad_clip > 0.0) {
      const double norm = gradient_norm(grads);
      if (norm > hyper_.grad_clip) scale_gradients(grads, hyper_.grad_clip / norm);
    }
    online_.sgd_step(grads, hyper_.alpha, hyper_.l2);
    ++updates_;
    if (updates_ % static_cast<std::size_t>(hyper_.target_update_frequency) == 0)
      target_.soft_update_from(online_, hyper_.target_smooth);
  }

  DdqnHyper hyper_;
  MlpPolicy online_;
  MlpPolicy target_;
  ReplayBuffer buffer_;
  Rng rng_;
  std::uint64_t seed_;
  double eps_;
  std::size_t episode_ = 0;
  std::size_t updates_ = 0;
};

inline MlpPolicy ddqn_train(const EnvFactory& make_period, std::size_t n_contacts,
                            const DdqnHyper& hyper, int episodes, std::uint64_t seed,
                            DdqnLog* log = nullptr) {
  DdqnTrainer trainer(n_contacts, hyper, seed);
  trainer.train(make_period, episodes, log);
  return trainer.online();
}

}  // namespace leosched::rl
