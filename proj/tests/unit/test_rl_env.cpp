#include <gtest/gtest.h>

#include "leosched/rl/env.hpp"
#include "leosched/rl/qlearning.hpp"
#include "leosched/scenarios/registry.hpp"

namespace leosched::rl {
namespace {

TEST(StepReward, HandValues) {
  EXPECT_NEAR(step_reward(10, 0, 10, 1, 100, 100), 10.0, 1e-12);
  EXPECT_NEAR(step_reward(5, 5, 10, 1, 100, 100), 5.0 - 5.0 * 5.0 / 15.0, 1e-12);
  EXPECT_NEAR(step_reward(5, 5, 10, 1, 100, 100), 10.0 / 3.0, 1e-12);
  EXPECT_NEAR(step_reward(0, 10, 10, 1, 100, 100), -5.0, 1e-12);
  EXPECT_EQ(step_reward(10, 0, 10, 0, 100, 100), 0.0);
  EXPECT_EQ(step_reward(10, 0, 10, 1, 0, 100), 0.0);
}

TEST(TerminalReward, HandValues) {
  EXPECT_NEAR(terminal_reward(0.5, 0.3, 100), 50.0, 1e-12);
  EXPECT_NEAR(terminal_reward(1.0, 0.5, 100), 400.0, 1e-12);
  EXPECT_NEAR(terminal_reward(1.0, 1.0, 100), 200.0, 1e-12);
  EXPECT_THROW(terminal_reward(1.0, 0.0, 100), std::logic_error);
}

TEST(StepReward, SignPropertyOnRandomSteps) {
  Rng r(17);
  for (int i = 0; i < 100000; ++i) {
    const int action = uniform01(r) < 0.5 ? 0 : 1;
    const auto v = uniform_int(r, 1, 20);
    const double d = uniform01(r) < 0.3 ? 0.0 : uniform01(r) * static_cast<double>(v);
    const double e = static_cast<double>(v) - d;
    const double dv = static_cast<double>(uniform_int(r, 1, 100));
    const double sr = step_reward(d, e, static_cast<double>(v), action, dv, 1.0 + uniform01(r) * 200);
    ASSERT_EQ(sr < 0.0, action == 1 && d == 0.0 && e > 0.0);
    ASSERT_EQ(sr > 0.0, action == 1 && d > 0.0);
    if (action == 1 && d > 0.0) {
      const double f1 = d / dv;
      ASSERT_LE(f1 * e / (e + v), f1);
    }
  }
}

TEST(Env, ResetState) {
  const auto p = make_period(contacts_from({0.3, 0.6}, {10, 30}), 20);
  DownlinkEnv env(p, {}, 1);
  const auto o = env.reset();
  EXPECT_EQ(o.cvr, 1.0);
  EXPECT_EQ(o.dv, 1.0);
  EXPECT_EQ(o.cc_next, 0.3);
  ASSERT_EQ(o.sgc.size(), 2U);
  EXPECT_EQ(o.sgc[0].cc, 0.3);
  EXPECT_EQ(o.sgc[1].cc, 0.6);
  EXPECT_DOUBLE_EQ(o.sgc[1].volume, 0.75);
  EXPECT_EQ(o.input_dim(), 7U);
  EXPECT_FALSE(env.done());
}

TEST(Env, EmptyBufferEndsAtReset) {
  const auto p = make_period(contacts_from({0.3, 0.6}, {10, 10}), 0);
  DownlinkEnv env(p, {}, 1);
  EXPECT_TRUE(env.done());
  EXPECT_EQ(env.episode_return(), 100.0);
  EXPECT_EQ(env.result().delivery_ratio, 1.0);
  EXPECT_THROW(env.step(1), std::logic_error);
}

TEST(Env, SkipAdvancesWithZeroReward) {
  const auto p = make_period(contacts_from({0.3, 0.6}, {10, 10}), 5);
  DownlinkEnv env(p, {}, 1);
  const auto out = env.step(0);
  EXPECT_EQ(out.reward, 0.0);
  EXPECT_FALSE(out.done);
  EXPECT_EQ(out.observation.next, 1U);
  EXPECT_EQ(out.observation.sgc[0].cc, 1.0);
  EXPECT_DOUBLE_EQ(out.observation.cvr, 0.5);
  EXPECT_THROW(env.step(2), std::invalid_argument);
}

TEST(Env, OvercastContactPenalty) {
  const auto p = make_period(contacts_from({1.0, 0.0}, {10, 90}), 100);
  DownlinkEnv env(p, {}, 1);
  const auto out = env.step(1);
  EXPECT_NEAR(out.reward, -5.0, 1e-12);
  EXPECT_FALSE(out.done);
}

TEST(Env, LastStepCarriesTerminalReward) {
  const auto p = make_period(contacts_from({0.0}, {10}), 5);
  DownlinkEnv env(p, {}, 1);
  const auto out = env.step(1);
  EXPECT_TRUE(out.done);
  // Delivers 5, excess 5: step 100/5 * 5 * (1 - 5/15), terminal 2 * 100 / 1.
  EXPECT_NEAR(out.step_component, 100.0 * 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(out.terminal_component, 200.0, 1e-12);
  EXPECT_NEAR(out.reward, out.step_component + out.terminal_component, 1e-12);
}

TEST(Env, PropertiesOnUniformEpisodes) {
  const auto sc = uniform_scenario();
  Rng act(5);
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const auto p = sc(s);
    DownlinkEnv env(p, {}, s);
    auto obs = env.reset();
    double sum = 0.0, step_sum = 0.0, terminal = 0.0;
    std::size_t steps = 0;
    auto in_unit = [](const Observation& o) {
      bool ok = o.cc_next >= 0 && o.cc_next <= 1 && o.dv >= 0 && o.dv <= 1 && o.cvr >= 0 && o.cvr <= 1;
      for (const auto& row : o.sgc) ok = ok && row.cc >= 0 && row.cc <= 1 && row.volume >= 0 && row.volume <= 1;
      return ok;
    };
    ASSERT_TRUE(in_unit(obs));
    while (!env.done()) {
      const auto out = env.step(uniform01(act) < 0.6 ? 1 : 0);
      sum += out.reward;
      step_sum += out.step_component;
      terminal += out.terminal_component;
      ++steps;
      ASSERT_TRUE(in_unit(out.observation));
    }
    ASSERT_LE(steps, p.size());
    ASSERT_NEAR(sum, env.episode_return(), 1e-9);
    ASSERT_NEAR(step_sum, env.step_reward_sum(), 1e-9);
    ASSERT_NEAR(terminal, env.terminal_reward_value(), 1e-9);
    ASSERT_NEAR(env.episode_return(), env.step_reward_sum() + env.terminal_reward_value(), 1e-9);
    // Energy identity on every used contact.
    const auto r = env.result();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (r.decisions[i]) {
        ASSERT_DOUBLE_EQ(r.delivered_per_contact[i] + r.excess_per_contact[i],
                         static_cast<double>(p.contacts[i].volume));
      }
  }
}

TEST(Discretize, Examples) {
  Observation o;
  o.cc_next = 0.0;
  EXPECT_EQ(discretize_observation(o, 10), (BinTuple{0, 0, 0, 0, 0}));
  o.cc_next = 1.0;
  EXPECT_EQ(discretize_observation(o, 10)[0], 9);
  o.cc_next = 0.55;
  EXPECT_EQ(discretize_observation(o, 10)[0], 5);
  EXPECT_THROW(discretize_observation(o, 1), std::invalid_argument);
}

TEST(Discretize, SummariesOverRemainingContacts) {
  Observation o;
  o.cc_next = 0.2;
  o.sgc = {{1.0, 0.25}, {0.25, 0.25}, {0.45, 0.25}, {0.65, 0.25}};
  o.next = 1;
  const auto t = discretize_observation(o, 10);
  EXPECT_EQ(t[3], 4);  // mean 0.45
  EXPECT_EQ(t[4], 7);  // 3 of 4 left
}

TEST(PolicyAct, TieGoesToSkip) {
  EXPECT_EQ(greedy_action({0.0, 0.0}), 0);
  EXPECT_EQ(greedy_action({1.0, 0.5}), 0);
  EXPECT_EQ(greedy_action({0.5, 1.0}), 1);
}

class ConstPolicy final : public Policy {
 public:
  explicit ConstPolicy(std::array<double, 2> q) : q_(q) {}
  std::array<double, 2> q_values(const Observation&) const override { return q_; }

 private:
  std::array<double, 2> q_;
};

TEST(PolicyAct, EpsilonOneIsUniform) {
  const ConstPolicy p({1.0, 0.0});
  Rng r(3);
  int ones = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ones += policy_act(p, Observation{}, 1.0, r);
  EXPECT_NEAR(ones, n / 2, 3 * std::sqrt(n * 0.25));
}

TEST(PolicyAct, EpsilonZeroIsGreedy) {
  Rng r(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(policy_act(ConstPolicy({1.0, 0.0}), Observation{}, 0.0, r), 0);
    EXPECT_EQ(policy_act(ConstPolicy({0.0, 0.0}), Observation{}, 0.0, r), 0);
    EXPECT_EQ(policy_act(ConstPolicy({0.0, 1.0}), Observation{}, 0.0, r), 1);
  }
}

TEST(EpsilonSchedule, Shapes) {
  EpsilonSchedule m{1.0, 0.1, 0.5, EpsilonSchedule::Shape::multiplicative};
  EXPECT_DOUBLE_EQ(m.next(1.0), 0.5);
  EXPECT_DOUBLE_EQ(m.next(0.15), 0.1);
  EpsilonSchedule l{1.0, 0.1, 0.25, EpsilonSchedule::Shape::linear};
  EXPECT_DOUBLE_EQ(l.next(1.0), 0.75);
  EXPECT_DOUBLE_EQ(l.next(0.2), 0.1);
  EXPECT_THROW(parse_epsilon_shape("cubic"), std::invalid_argument);
}

}  // namespace
}  // namespace leosched::rl
