#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "kaze/matcher.hpp"
#include "support/synthetic.hpp"

namespace kaze {
namespace {

Descriptor axis(std::size_t i) {
  Descriptor d;
  d.values[i] = 1.0f;
  return d;
}

TEST(Match, IdenticalListsGiveIdentity) {
  const auto d = testing::random_descriptors(15, 3);
  const auto m = match(d, d);
  ASSERT_EQ(m.size(), d.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(m[i].index_a, i);
    EXPECT_EQ(m[i].index_b, i);
    EXPECT_EQ(m[i].distance, 0.0);
  }
}

TEST(Match, OrthogonalPairAtRatioOne) {
  const std::vector<Descriptor> d{axis(0), axis(1)};
  EXPECT_EQ(match(d, d, {1.0, true}).size(), 2u);
}

TEST(Match, SingleCandidateAlwaysPassesRatio) {
  const std::vector<Descriptor> a{axis(3)}, b{axis(5)};
  const auto m = match(a, b, {0.1, true});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_NEAR(m[0].distance, std::sqrt(2.0), 1e-7);
}

TEST(Match, RecoversShuffledPermutation) {
  const auto a = testing::random_descriptors(20, 77);
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
  std::vector<Descriptor> b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) b[perm[i]] = a[i];

  // Oracle: brute-force nearest neighbour over all pairs.
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t best = 0;
    double bd = 1e9;
    for (std::size_t j = 0; j < b.size(); ++j) {
      double d = 0;
      for (std::size_t k = 0; k < kDescriptorSize; ++k) d += std::pow(double(a[i].values[k]) - b[j].values[k], 2);
      if (d < bd) bd = d, best = j;
    }
    ASSERT_EQ(best, perm[i]);
  }
  const auto m = match(a, b);
  ASSERT_EQ(m.size(), a.size());
  for (const auto& mm : m) EXPECT_EQ(mm.index_b, perm[mm.index_a]);
}

TEST(Match, DistancesAreBruteForceL2) {
  const auto a = testing::random_descriptors(30, 1), b = testing::random_descriptors(40, 2);
  for (const auto& m : match(a, b, {1.0, false})) {
    double d = 0;
    for (std::size_t k = 0; k < kDescriptorSize; ++k)
      d += std::pow(double(a[m.index_a].values[k]) - b[m.index_b].values[k], 2);
    EXPECT_NEAR(m.distance, std::sqrt(d), 1e-6);
  }
}

TEST(Match, InjectiveAndMonotoneInRatio) {
  auto a = testing::random_descriptors(60, 9);
  auto b = testing::random_descriptors(50, 10);
  // Plant near-duplicates so the ratio test has something to keep.
  std::mt19937 rng(4);
  std::normal_distribution<float> noise(0.0f, 0.03f);
  for (std::size_t i = 0; i < 25; ++i) {
    b[i * 2] = a[i];
    for (float& v : b[i * 2].values) v += noise(rng);
  }
  std::size_t previous = 0;
  for (double ratio : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    const auto m = match(a, b, {ratio, true});
    EXPECT_GE(m.size(), previous);
    previous = m.size();
    std::set<std::size_t> sa, sb;
    for (const auto& mm : m) {
      EXPECT_TRUE(sa.insert(mm.index_a).second);
      EXPECT_TRUE(sb.insert(mm.index_b).second);
    }
  }
  EXPECT_GE(previous, 25u);
}

TEST(Match, DegenerateDescriptorsNeverMatch) {
  auto a = testing::random_descriptors(5, 1);
  Descriptor zero;
  zero.degenerate = true;
  a.push_back(zero);
  for (const auto& m : match(a, a, {1.0, true})) EXPECT_NE(m.index_a, 5u);
  EXPECT_EQ(match(a, a).size(), 5u);
}

TEST(Match, EmptyInputsAndBadRatio) {
  const auto a = testing::random_descriptors(3, 1);
  EXPECT_TRUE(match({}, a).empty());
  EXPECT_TRUE(match(a, {}).empty());
  EXPECT_THROW(match(a, a, {0.0, true}), std::invalid_argument);
  EXPECT_THROW(match(a, a, {1.5, true}), std::invalid_argument);
}

TEST(Match, TiesResolveToLowerIndex) {
  const std::vector<Descriptor> a{axis(0)};
  const std::vector<Descriptor> b{axis(1), axis(2)};
  const auto m = match(a, b, {1.0, false});
  // d1 == d2 fails the strict ratio test even at ratio 1.
  EXPECT_TRUE(m.empty());
  const std::vector<Descriptor> c{axis(0), axis(0)};
  const auto m2 = match(c, std::vector<Descriptor>{axis(0)}, {1.0, true});
  ASSERT_EQ(m2.size(), 1u);
  EXPECT_EQ(m2[0].index_a, 0u);
}

}  // namespace
}  // namespace kaze
