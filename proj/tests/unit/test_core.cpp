#include <gtest/gtest.h>

#include <set>

#include "leosched/core.hpp"
#include "leosched/time.hpp"

namespace leosched {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(uniform01(a), uniform01(b));
}

TEST(Rng, Uniform01InHalfOpenUnitInterval) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(r);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, UniformIntCoversInclusiveRange) {
  Rng r(9);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = uniform_int(r, 5, 14);
    ASSERT_GE(v, 5);
    ASSERT_LE(v, 14);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 10U);
}

TEST(Rng, NormalHasUnitMoments) {
  Rng r(77);
  double s = 0, ss = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = normal01(r);
    s += z;
    ss += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(Rng, DerivedSeedsDifferByKeyAndParent) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 7), derive_seed(5, 7));
}

TEST(TotalVolume, SpecExamples) {
  EXPECT_EQ(total_volume(make_period(contacts_from(std::vector<double>(10, 0.0),
                                                   std::vector<std::int64_t>(10, 10)),
                                     0)),
            100);
  EXPECT_EQ(total_volume(make_period({}, 0)), 0);
  EXPECT_EQ(total_volume(make_period(contacts_from({0, 0, 0}, {3, 7, 5}), 0)), 15);
}

TEST(RemainingCapacity, SpecExamples) {
  const auto p = make_period(contacts_from(std::vector<double>(10, 0.2),
                                           std::vector<std::int64_t>(10, 10)),
                             50);
  EXPECT_EQ(remaining_capacity(p, 0), 100);
  EXPECT_EQ(remaining_capacity(p, 1), 90);
  EXPECT_EQ(remaining_capacity(p, 10), 0);
  EXPECT_THROW(remaining_capacity(p, 11), std::out_of_range);
}

TEST(RemainingCapacity, NonIncreasingAndStartsAtTotal) {
  Rng r(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::int64_t> v(8);
    for (auto& x : v) x = uniform_int(r, 0, 20);
    const auto p = make_period(contacts_from(std::vector<double>(8, 0.5), v), 5);
    EXPECT_EQ(remaining_capacity(p, 0), total_volume(p));
    for (std::size_t k = 1; k <= p.size(); ++k)
      EXPECT_LE(remaining_capacity(p, k), remaining_capacity(p, k - 1));
    EXPECT_EQ(remaining_capacity(p, p.size()), 0);
  }
}

TEST(Validate, RejectsBadContactsAndPeriods) {
  auto c = contacts_from({0.5}, {10});
  c[0].cloud_cover = 1.5;
  EXPECT_THROW(make_period(c, 1), std::invalid_argument);
  c = contacts_from({0.5}, {-1});
  EXPECT_THROW(make_period(c, 1), std::invalid_argument);
  EXPECT_THROW(make_period(contacts_from({0.5}, {10}), -1), std::invalid_argument);
  auto dup = contacts_from({0.1, 0.2}, {1, 1});
  dup[1].index = 0;
  EXPECT_THROW(make_period(dup, 1), std::invalid_argument);
  EXPECT_THROW(make_period(contacts_from({0.5}, {10}), 1, 0), std::invalid_argument);
}

TEST(MakePeriod, OneFullContactDeliversItsVolume) {
  const auto p = make_period(contacts_from({0.0}, {10}), 10, 4);
  EXPECT_DOUBLE_EQ(p.packets_per_sample * p.link_sample_rate * 10, 10.0);
}

TEST(DecisionMask, BasicOperations) {
  DecisionMask m(4);
  EXPECT_EQ(m.count(), 0U);
  m.set(1);
  m.set(3);
  EXPECT_EQ(m.count(), 2U);
  EXPECT_TRUE(m[1]);
  EXPECT_FALSE(m[0]);
  EXPECT_EQ(m, (DecisionMask{0, 1, 0, 1}));
}

TEST(Time, RoundTripIso8601) {
  const auto t = parse_iso8601("2023-01-01T00:00Z");
  EXPECT_EQ(t, make_time(2023, 1, 1));
  EXPECT_EQ(format_iso8601(make_time(2024, 2, 29, 13, 5, 9)), "2024-02-29T13:05:09Z");
  EXPECT_EQ(parse_iso8601("2024-02-29T13:05:09+00:00"), make_time(2024, 2, 29, 13, 5, 9));
  EXPECT_THROW(parse_iso8601("2024-02-29T13:05:09+02:00"), std::invalid_argument);
  EXPECT_THROW(parse_iso8601("yesterday"), std::invalid_argument);
}

TEST(Time, FloorHour) {
  EXPECT_EQ(floor_hour(make_time(2023, 5, 1, 7, 59, 59)), make_time(2023, 5, 1, 7));
}

}  // namespace
}  // namespace leosched
