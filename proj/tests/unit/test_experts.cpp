#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "discovery/errors.hpp"
#include "discovery/experts.hpp"

using namespace discovery;

namespace {

std::vector<bool> sieve(std::uint64_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = false;
  if (limit >= 1) prime[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!prime[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) prime[j] = false;
  }
  return prime;
}

}  // namespace

TEST(IsPrime, AgreesWithSieve) {
  const auto prime = sieve(200000);
  for (std::uint64_t n = 0; n <= 200000; ++n) ASSERT_EQ(is_prime(n), prime[n]) << n;
}

TEST(IsPrime, LargeValues) {
  EXPECT_TRUE(is_prime(2305843009213693951ULL));   // 2^61 - 1
  EXPECT_FALSE(is_prime(2305843009213693953ULL));  // 2^61 + 1, divisible by 3
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  EXPECT_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_TRUE(is_prime(7919));
  EXPECT_FALSE(is_prime(7920));
}

TEST(SevenExpert, CountsFollowProportions) {
  const auto inst = make_seven_expert_instance(1000);
  const std::vector<std::uint64_t> q1000{512, 256, 128, 64, 32, 16, 8};
  ASSERT_EQ(inst.num_experts(), 7u);
  for (std::size_t e = 0; e < 7; ++e) EXPECT_EQ(std::get<UniformDisjoint>(inst.expert(e)).interesting, q1000[e]);

  const auto small = make_seven_expert_instance(125);
  const std::vector<std::uint64_t> q125{64, 32, 16, 8, 4, 2, 1};
  for (std::size_t e = 0; e < 7; ++e) EXPECT_EQ(std::get<UniformDisjoint>(small.expert(e)).interesting, q125[e]);

  EXPECT_THROW(make_seven_expert_instance(10), InvalidInstance);
}

TEST(UniformDisjoint, SamplesOwnBlockUniformly) {
  const auto inst = ProblemInstance::uniform_disjoint(4, {2, 2});
  RngStream s(3);
  std::map<std::uint64_t, int> counts;
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[inst.sample(1, s).value];
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [item, c] : counts) {
    EXPECT_GE(item, 4u);
    EXPECT_LE(item, 7u);
    EXPECT_NEAR(c, n / 4.0, 4.0 * std::sqrt(n * 0.25 * 0.75));
  }
  EXPECT_TRUE(inst.is_interesting(ItemId{4}));
  EXPECT_TRUE(inst.is_interesting(ItemId{5}));
  EXPECT_FALSE(inst.is_interesting(ItemId{6}));
  EXPECT_TRUE(inst.disjoint_interesting_supports());
}

TEST(UniformDisjoint, RejectsBadParameters) {
  EXPECT_THROW(ProblemInstance::uniform_disjoint(0, {0}), InvalidInstance);
  EXPECT_THROW(ProblemInstance::uniform_disjoint(4, {5}), InvalidInstance);
  EXPECT_THROW(ProblemInstance::uniform_disjoint(4, {}), InvalidInstance);
}

TEST(Categorical, DegenerateAlwaysZero) {
  const auto inst = ProblemInstance::categorical({{1.0}}, {0});
  RngStream s(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(inst.sample(0, s).value, 0u);
  EXPECT_THROW(ProblemInstance::categorical({{0.5, 0.4}}, {0}), InvalidInstance);
  EXPECT_THROW(ProblemInstance::categorical({{1.5, -0.5}}, {0}), InvalidInstance);
}

TEST(Categorical, EmpiricalFrequencies) {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const auto inst = ProblemInstance::categorical({p}, {1, 3});
  RngStream s(8);
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[inst.sample(0, s).value];
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(counts[x] / double(n), p[x], 4.0 * std::sqrt(p[x] * (1 - p[x]) / n));
}

TEST(Geometric, PmfAndSampleMean) {
  const auto two = make_prime_instance({2.0});
  EXPECT_DOUBLE_EQ(two.probability(0, ItemId{1}), 0.5);
  EXPECT_DOUBLE_EQ(two.probability(0, ItemId{3}), 0.125);
  EXPECT_EQ(two.probability(0, ItemId{0}), 0.0);

  const auto inst = make_prime_instance({100.0});
  RngStream s(2024);
  const int n = 1000000;
  double sum = 0.0;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const auto x = inst.sample(0, s).value;
    ASSERT_GE(x, 1u);
    sum += static_cast<double>(x);
    ones += x == 1 ? 1 : 0;
  }
  EXPECT_NEAR(sum / n, 100.0, 1.0);
  // P(X=1) = 1/100, checked to three standard errors.
  EXPECT_NEAR(ones / double(n), 0.01, 3.0 * std::sqrt(0.01 * 0.99 / n));
}

TEST(Geometric, PrimeMassMatchesDirectSummation) {
  const auto inst = make_prime_instance({100.0, 300.0});
  for (std::size_t e = 0; e < 2; ++e) {
    const long double p = 1.0L / (e == 0 ? 100.0L : 300.0L);
    const std::uint64_t limit = inst.support_cutoff(e) + 20000;
    const auto prime = sieve(limit);
    long double mass = 0.0L;
    long double term = p;  // P(X = x), starting at x = 1
    for (std::uint64_t x = 1; x <= limit; ++x) {
      if (prime[x]) mass += term;
      term *= 1.0L - p;
    }
    const ItemSet none;
    EXPECT_NEAR(true_missing_mass(inst, e, none), static_cast<double>(mass), 1e-10);
    EXPECT_NEAR(inst.initial_missing_mass(e), static_cast<double>(mass), 1e-10);
    EXPECT_LT(inst.tail_mass(e), 1e-12);
  }
  EXPECT_FALSE(inst.disjoint_interesting_supports());
}

TEST(TrueMissingMass, UniformExamples) {
  const auto inst = ProblemInstance::uniform_disjoint(4, {2, 2});
  ItemSet found;
  EXPECT_DOUBLE_EQ(true_missing_mass(inst, 0, found), 0.5);
  found.insert(ItemId{0});
  EXPECT_DOUBLE_EQ(true_missing_mass(inst, 0, found), 0.25);
  found.insert(ItemId{1});
  EXPECT_DOUBLE_EQ(true_missing_mass(inst, 0, found), 0.0);
  EXPECT_DOUBLE_EQ(true_missing_mass(inst, 1, found), 0.5);
}

TEST(TrueMissingMass, InitialMassesSumToProportions) {
  const auto inst = make_seven_expert_instance(1000);
  double total = 0.0;
  for (std::size_t e = 0; e < 7; ++e) total += inst.initial_missing_mass(e);
  EXPECT_NEAR(total, 1.016, 1e-12);
}

// The tracker is incremental; the oracle recomputes the mass from the full set.
TEST(MissingMassTracker, MatchesRecomputationOnRandomHistories) {
  std::vector<ProblemInstance> instances;
  instances.push_back(ProblemInstance::uniform_disjoint(20, {7, 3, 12}));
  instances.push_back(ProblemInstance::categorical({{0.1, 0.2, 0.3, 0.4}, {0.25, 0.25, 0.25, 0.25}, {0.0, 0.5, 0.0, 0.5}},
                                                   {1, 2, 3}));
  instances.push_back(make_prime_instance({5.0, 20.0}));
  for (const auto& inst : instances) {
    MissingMassTracker tracker(inst);
    RngStream s(17);
    std::size_t expected_found = 0;
    ItemSet seen;
    for (int step = 0; step < 400; ++step) {
      const std::size_t e = s.next_below(inst.num_experts());
      const ItemId item = inst.sample(e, s);
      const bool fresh = inst.is_interesting(item) && !seen.contains(item);
      if (inst.is_interesting(item)) seen.insert(item);
      expected_found += fresh ? 1 : 0;
      ASSERT_EQ(tracker.observe(item), fresh);
      for (std::size_t j = 0; j < inst.num_experts(); ++j)
        ASSERT_NEAR(tracker.mass(j), true_missing_mass(inst, j, seen), 1e-12);
    }
    EXPECT_EQ(tracker.found(), expected_found);
  }
}

TEST(MissingMassTracker, MassNeverIncreases) {
  const auto inst = make_seven_expert_instance(128);
  MissingMassTracker tracker(inst);
  RngStream s(4);
  std::vector<double> last(tracker.masses().begin(), tracker.masses().end());
  for (int step = 0; step < 2000; ++step) {
    tracker.observe(inst.sample(s.next_below(7), s));
    for (std::size_t e = 0; e < 7; ++e) {
      ASSERT_LE(tracker.mass(e), last[e]);
      // One draw removes at most one item, so at most 1/N of mass.
      ASSERT_LE(last[e] - tracker.mass(e), 1.0 / 128 + 1e-15);
      last[e] = tracker.mass(e);
    }
  }
}
