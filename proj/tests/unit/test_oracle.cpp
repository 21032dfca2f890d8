#include <gtest/gtest.h>

#include "leosched/metrics.hpp"
#include "leosched/oracle.hpp"
#include "leosched/scenarios/registry.hpp"
#include "leosched/schemes_static.hpp"

namespace leosched {
namespace {

KnapsackInstance instance(std::vector<KnapsackItem> items, double w, double beta = 1,
                          double upsilon = 1) {
  for (std::size_t i = 0; i < items.size(); ++i) items[i].index = i;
  return {std::move(items), w, beta, upsilon};
}

TEST(ExpectedItem, HandValues) {
  const auto p = make_period(contacts_from({0.0, 1.0, 0.3}, {10, 10, 10}), 10);
  auto it = expected_item(p.contacts[0], p, 1, 1);
  EXPECT_DOUBLE_EQ(it.weight, 10.0);
  EXPECT_DOUBLE_EQ(it.value, 10.0);
  it = expected_item(p.contacts[1], p, 1, 1);
  EXPECT_DOUBLE_EQ(it.weight, 0.0);
  EXPECT_DOUBLE_EQ(it.value, -10.0);
  it = expected_item(p.contacts[2], p, 1, 0.5);
  EXPECT_NEAR(it.weight, 7.0, 1e-12);
  EXPECT_NEAR(it.value, 5.5, 1e-12);
}

TEST(ExpectedItem, IndependentOfSampleRate) {
  const auto p = make_period(contacts_from({0.3}, {10}), 10, 4);
  EXPECT_NEAR(expected_item(p.contacts[0], p, 1, 1).weight, 7.0, 1e-12);
}

TEST(SoftKnapsack, HandValues) {
  const auto k = instance({{10, 10}, {5.5, 7}}, 10);
  EXPECT_EQ(soft_knapsack_objective(DecisionMask{0, 0}, k), 0.0);
  EXPECT_EQ(soft_knapsack_objective(DecisionMask{1, 0}, k), 10.0);
  EXPECT_NEAR(soft_knapsack_objective(DecisionMask{1, 1}, k), 1.5, 1e-12);
  EXPECT_THROW(soft_knapsack_objective(DecisionMask{1}, k), std::invalid_argument);
}

TEST(SoftKnapsack, PenaltyDecomposition) {
  Rng r(4);
  for (int t = 0; t < 500; ++t) {
    std::vector<KnapsackItem> items(6);
    for (auto& it : items) it = {uniform01(r) * 20 - 5, uniform01(r) * 10, 0};
    const auto k = instance(items, uniform01(r) * 30);
    DecisionMask m(6);
    double cv = 0, wt = 0;
    for (std::size_t i = 0; i < 6; ++i)
      if (uniform01(r) < 0.5) {
        m.set(i);
        cv += items[i].value;
        wt += items[i].weight;
      }
    const double penalty = cv - soft_knapsack_objective(m, k);
    ASSERT_GE(penalty, -1e-12);
    ASSERT_EQ(penalty > 1e-12, wt > k.capacity + 1e-12);
  }
}

TEST(BruteForce, AllNegativeGivesEmpty) {
  const auto sol = brute_force_optimal(instance({{-1, 1}, {-2, 0}}, 5));
  EXPECT_EQ(sol.mask, (DecisionMask{0, 0}));
  EXPECT_EQ(sol.value, 0.0);
}

TEST(BruteForce, DominantSingleton) {
  const auto sol = brute_force_optimal(instance({{1, 4}, {20, 10}, {2, 5}}, 10));
  EXPECT_EQ(sol.mask, (DecisionMask{0, 1, 0}));
  EXPECT_EQ(sol.value, 20.0);
}

TEST(BruteForce, TiesResolveLexicographically) {
  const auto sol = brute_force_optimal(instance({{5, 1}, {5, 1}}, 1, 10, 0));
  // Either single item scores 5; {0,1} sorts before {1,0}.
  EXPECT_EQ(sol.mask, (DecisionMask{0, 1}));
}

TEST(BruteForce, GuardsLargeInstances) {
  EXPECT_THROW(brute_force_optimal(instance(std::vector<KnapsackItem>(25), 1)), std::invalid_argument);
}

TEST(BruteForce, DominatesGreedyAndEveryMask) {
  Rng r(77);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = t < 50 ? 10 : 12;
    std::vector<KnapsackItem> items(n);
    for (auto& it : items) it = {uniform01(r) * 20 - 5, uniform01(r) * 10, 0};
    const auto k = instance(items, uniform01(r) * 40);
    const auto best = brute_force_optimal(k);
    EXPECT_LE(soft_knapsack_objective(greedy_ratio_selection(k), k), best.value + 1e-12);
    DecisionMask m(n);
    for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
      for (std::size_t i = 0; i < n; ++i) m.set(i, (bits >> i) & 1U);
      ASSERT_LE(soft_knapsack_objective(m, k), best.value + 1e-12);
    }
  }
}

TEST(BruteForce, ScaleCovariance) {
  Rng r(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<KnapsackItem> items(8);
    for (auto& it : items) it = {uniform01(r) * 20 - 5, uniform01(r) * 10, 0};
    const auto k = instance(items, uniform01(r) * 30, 1.0, 0.5);
    auto scaled = k;
    const double lambda = 2.5;
    for (auto& it : scaled.items) it.value *= lambda;
    scaled.beta *= lambda;
    scaled.upsilon *= lambda;
    const auto a = brute_force_optimal(k), b = brute_force_optimal(scaled);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_NEAR(b.value, lambda * a.value, 1e-9);
  }
}

TEST(WeightedObjective, HandValues) {
  EpisodeResult r;
  r.decisions = DecisionMask{1, 1, 0};
  r.delivered_per_contact = {30, 20, 99};
  r.excess_per_contact = {5, 15, 99};
  EXPECT_DOUBLE_EQ(weighted_objective(r, 1.0), 50.0);
  EXPECT_DOUBLE_EQ(weighted_objective(r, 0.0), -20.0);
  EXPECT_DOUBLE_EQ(weighted_objective(r, 0.5), 15.0);
  EXPECT_THROW(weighted_objective(r, 1.1), std::invalid_argument);
}

TEST(WeightedObjective, CgrDeliveredEqualsDvTimesRatio) {
  const auto sc = uniform_scenario();
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto p = sc(s);
    const auto r = run_static_scheme(cgr_decider(), p, s);
    ASSERT_NEAR(weighted_objective(r, 1.0), static_cast<double>(p.dv_init) * r.delivery_ratio, 1e-9);
  }
}

TEST(ExpectedInstance, SchemesNeverBeatTheOracle) {
  const auto sc = uniform_scenario();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto p = sc(s);
    const auto k = expected_instance(p);
    const double best = brute_force_optimal(k).value;
    const auto cgr = run_static_scheme(cgr_decider(), p, s).decisions;
    const auto sort = static_sort_plan(p.dv_init, p.contacts, 1.0);
    EXPECT_LE(soft_knapsack_objective(cgr, k), best + 1e-9);
    EXPECT_LE(soft_knapsack_objective(sort, k), best + 1e-9);
  }
}

}  // namespace
}  // namespace leosched
