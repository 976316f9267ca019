#include <gtest/gtest.h>

#include "abpkit/errors.hpp"
#include "abpkit/fullrank.hpp"
#include "abpkit/partition.hpp"
#include "support.hpp"

using namespace abpkit;
using namespace testing_support;

TEST(FullRank, TwoVariables) {
  const FullRankResult r = gen_fullrank({2, WRandom{1}});
  EXPECT_EQ(r.g, poly_of(2, {{{}, 1}, {{1, 2}, 1}}));
  EXPECT_TRUE(r.w_used.empty());
  EXPECT_EQ(rank_phi(r.g, Partition({Side::Y, Side::Z}, {1, 1})), 2);
}

TEST(FullRank, FourVariablesHandUnroll) {
  WExplicit w;
  w.values[{1, 2, 4}] = Fe{7};
  const FullRankResult r = gen_fullrank({4, w});
  const auto a = poly_of(4, {{{}, 1}, {{1, 4}, 1}}) * poly_of(4, {{{}, 1}, {{2, 3}, 1}});
  const auto b = poly_of(4, {{{}, 1}, {{1, 2}, 1}}) * poly_of(4, {{{}, 1}, {{3, 4}, 1}});
  EXPECT_EQ(r.g, a + poly_scale(b, Fe{7}));
  ASSERT_EQ(r.w_used.size(), 1u);
  EXPECT_EQ(r.w_used.begin()->first, (WKey{1, 2, 4}));
}

TEST(FullRank, Errors) {
  EXPECT_THROW(gen_fullrank({5, WRandom{1}}), DimensionError);
  EXPECT_THROW(gen_fullrank({4, WExplicit{}}), LookupError);
  EXPECT_THROW(gen_fullrank({22, WRandom{1}}), BudgetExceeded);
}

TEST(FullRankProperty, MultilinearAndIntervalScoped) {
  for (int n : {2, 4, 6, 8}) {
    const FullRankResult r = gen_fullrank({n, WRandom{static_cast<std::uint64_t>(n)}});
    for (const Term& t : r.g.terms()) EXPECT_EQ(t.mono & ~all_vars(n), Monomial{0});
    for (const auto& [ij, keys] : r.touched) {
      for (const WKey& k : keys) {
        EXPECT_GE(std::get<0>(k), ij.first);
        EXPECT_LE(std::get<2>(k), ij.second);
      }
    }
    // every key is an odd-length left block
    for (const auto& [k, v] : r.w_used) EXPECT_EQ((std::get<1>(k) - std::get<0>(k) + 1) % 2, 0);
  }
}

TEST(FullRankProperty, RandomWDoesNotDependOnOrder) {
  EXPECT_EQ(random_w(3, {1, 2, 4}, kF), random_w(3, {1, 2, 4}, kF));
  EXPECT_NE(random_w(3, {1, 2, 4}, kF), random_w(4, {1, 2, 4}, kF));
  const FullRankResult a = gen_fullrank({8, WRandom{9}});
  for (const auto& [k, v] : a.w_used) EXPECT_EQ(v, random_w(9, k, kF));
}

TEST(FullRankProperty, FullRankUnderRandomPartitions) {
  for (int n : {2, 4, 6, 8}) {
    const FullRankResult r = gen_fullrank({n, WRandom{11}});
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Partition phi = sample_partition(n, s * 977 + static_cast<std::uint64_t>(n));
      auto y = std::vector<int>(static_cast<std::size_t>(n), 0), z = y;
      for (int v = 1; v <= n; ++v) (phi.side(v) == Side::Y ? y : z)[static_cast<std::size_t>(v - 1)] = phi.slot(v);
      EXPECT_EQ(oracle_pd_rank(r.g, y, z), 1 << (n / 2));
    }
  }
  const FullRankCheck c = fullrank_rank_check(8, 50, 3);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.expected, 16);
}
