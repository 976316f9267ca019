#include <gtest/gtest.h>

#include "abpkit/errors.hpp"
#include "abpkit/formula.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/ordered.hpp"
#include "abpkit/rng.hpp"
#include "support.hpp"

using namespace abpkit;
using namespace testing_support;

TEST(OrderToPass, Diamond) {
  const Abp d = diamond();
  const OrderList orders{Permutation({1, 2}), Permutation({2, 1})};
  const PassResult r = order_to_pass(d, orders);
  EXPECT_EQ(abp_poly(r.q), poly_of(2, {{{1, 2}, 2}}));
  const Classification c = classify(r.q);
  ASSERT_TRUE(c.l_pass);
  EXPECT_EQ(c.l_pass->count, 2);
  NodeId failed = 0;
  EXPECT_TRUE(verify_band_claim(d, r, &failed)) << failed;
  EXPECT_TRUE(check_band_purity(r, orders));
  // both first edges are increasing under (1,2), so a and b stay in band 1;
  // only b -x1-> t has to move on to band 2
  ASSERT_TRUE(r.copies[1][0].has_value());
  ASSERT_TRUE(r.copies[2][0].has_value());
  EXPECT_EQ(subprogram_poly(r.q, r.q.source(), *r.copies[1][0]), poly_of(2, {{{1}, 1}}));
  EXPECT_EQ(subprogram_poly(r.q, r.q.source(), *r.copies[2][0]), poly_of(2, {{{2}, 1}}));
  ASSERT_TRUE(r.copies[3][0].has_value() && r.copies[3][1].has_value());
  EXPECT_EQ(subprogram_poly(r.q, r.q.source(), *r.copies[3][0]), poly_of(2, {{{1, 2}, 1}}));
  EXPECT_EQ(subprogram_poly(r.q, r.q.source(), *r.copies[3][1]), poly_of(2, {{{1, 2}, 1}}));
  EXPECT_LE(r.non_padding_nodes(), orders.size() * d.num_nodes());
}

TEST(OrderToPass, SingleOrderGivesRoabp) {
  // two paths x3 x1 and x3 x2 x1 with a shared prefix
  const Abp p = make_abp(3, {{0}, {1}, {2, 3}, {4}}, {{0, 1, 3}, {1, 2, 0}, {1, 3, 2}, {2, 4, 1}, {3, 4, 1}});
  const OrderList orders{Permutation({3, 2, 1})};
  const PassResult r = order_to_pass(p, orders);
  EXPECT_TRUE(classify(r.q).roabp);
  EXPECT_EQ(abp_poly(r.q), abp_poly(p));
}

TEST(OrderToPass, RejectsUnorderedInput) {
  EXPECT_THROW(order_to_pass(diamond(), {Permutation::identity(2)}), OrderViolation);
}

// Ordered input whose two prefixes merge at u but need different bands for
// the shared suffix: the copy at (u, band 1) cannot be routed.
TEST(OrderToPass, RoutingConflictIsReported) {
  const Abp p = make_abp(3, {{0}, {1}, {2}}, {{0, 1, 1}, {0, 1, 2}, {1, 2, 3}});
  const OrderList orders{Permutation({3, 1, 2}), Permutation({1, 3, 2}), Permutation({2, 3, 1})};
  ASSERT_TRUE(check_ordered(p, orders).ok);
  EXPECT_THROW(order_to_pass(p, orders), InternalContradiction);
}

TEST(OrderToPassProperty, RandomOrderedPrograms) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = rng.between(1, 4);
    const int n = rng.between(3, 10);
    OrderedParams params{n, L, rng.between(2, n + 2), 3, 50, 15};
    const OrderedInstance inst = random_l_ordered(rng, params, kF);
    const Abp p = normalize(inst.abp);
    ASSERT_TRUE(check_ordered(p, inst.orders).ok);
    const PassResult r = order_to_pass(p, inst.orders);
    EXPECT_EQ(abp_poly(r.q), abp_poly(p));
    const Classification c = classify(r.q);
    ASSERT_TRUE(c.l_pass);
    EXPECT_LE(c.l_pass->count, L);
    EXPECT_LE(r.non_padding_nodes(), static_cast<std::size_t>(L) * p.num_nodes());
    EXPECT_TRUE(verify_band_claim(p, r));
    EXPECT_TRUE(check_band_purity(r, inst.orders));
    EXPECT_TRUE(is_syntactic_multilinear(r.q).ok);
    // band claim by hand at the sink
    MultilinearPoly sum(p.nvars(), kF);
    for (const auto& copy : r.copies[p.sink()]) {
      if (copy) sum = sum + subprogram_poly(r.q, r.q.source(), *copy);
    }
    EXPECT_EQ(sum, abp_poly(p));
  }
}

TEST(RoabpCensus, SingleOrderIsZero) {
  const Abp p = chain(9, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const RoabpCensus c = roabp_leaf_census(p, {Permutation::identity(9)});
  EXPECT_EQ(c.bound, 0);
  EXPECT_EQ(c.non_roabp_leaves, 0);
}

TEST(RoabpCensus, DiamondIsAtMostOne) {
  const RoabpCensus c = roabp_leaf_census(diamond(), {Permutation({1, 2}), Permutation({2, 1})});
  EXPECT_EQ(c.bound, 1);
  EXPECT_EQ(c.non_roabp_leaves, 1);
  EXPECT_TRUE(c.ok());
}

TEST(RoabpCensusProperty, FourOrders) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.between(4, 10);
    const OrderedInstance inst = random_l_ordered(rng, OrderedParams{n, 4, rng.between(2, n + 2), 3, 50, 15}, kF);
    const RoabpCensus c = roabp_leaf_census(normalize(inst.abp), inst.orders);
    EXPECT_EQ(c.bound, 2);
    EXPECT_LE(c.non_roabp_leaves, 2);
  }
}

TEST(LeafOrder, SymmetricPairAndCycle) {
  const Formula d = abp_to_formula(diamond());
  const LeafOrderInfo info = leaf_order_info(d, d.root());
  EXPECT_TRUE(info.symmetric_pair);
  EXPECT_TRUE(info.cyclic);
  const Formula c = abp_to_formula(chain(4, {2, 1}));
  EXPECT_FALSE(leaf_order_info(c, c.root()).symmetric_pair);
}
