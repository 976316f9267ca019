#include <gtest/gtest.h>

#include "abpkit/errors.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/paths.hpp"
#include "abpkit/rng.hpp"
#include "support.hpp"

using namespace abpkit;
using namespace testing_support;

TEST(Abp, RejectsBadLayering) {
  EXPECT_THROW(make_abp(2, {{0}, {1}}, {{0, 1, 3}}), ValidationError);           // var out of range
  EXPECT_THROW(make_abp(2, {{0}, {1}, {2}}, {{0, 2, 1}}), ValidationError);      // skips a layer
  EXPECT_THROW(make_abp(2, {{0, 1}, {2}}, {{0, 2, 1}, {1, 2, 2}}), ValidationError);  // two sources
  const Abp p = chain(2, {1, 2});
  EXPECT_THROW(p.layer_of(9), LookupError);
}

TEST(Abp, VariableSets) {
  const Abp p = chain(4, {3});
  EXPECT_EQ(subprogram_vars(p, p.source(), p.source()), Monomial{0});
  EXPECT_EQ(subprogram_vars(p, p.source(), p.sink()), var_bit(3));
  // two parallel paths x1 x2 and x3 x4
  const Abp q = make_abp(4, {{0}, {1, 2}, {3}}, {{0, 1, 1}, {1, 3, 2}, {0, 2, 3}, {2, 3, 4}});
  EXPECT_EQ(subprogram_vars(q, 0, 3), all_vars(4));
}

TEST(Abp, SubprogramPolyExamples) {
  const Abp p = diamond();
  EXPECT_EQ(subprogram_poly(p, 1, 1), MultilinearPoly::constant(2, kF, kF.one()));
  EXPECT_EQ(abp_poly(p), poly_of(2, {{{1, 2}, 2}}));
  const std::vector<Fe> pt{Fe{5}, Fe{7}};
  EXPECT_EQ(abp_eval(p, pt), Fe{70});
}

TEST(AbpProperty, DpMatchesPathEnumeration) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    SmAbpParams params{rng.between(2, 10), rng.between(2, 8), 3, 40, 35, 15};
    const Abp p = random_smabp(rng, params, kF);
    const auto oracle = brute_poly(p, p.source(), p.sink());
    ASSERT_TRUE(oracle.has_value());
    EXPECT_EQ(coeff_map(abp_poly(p)), *oracle);
    // a random inner pair
    const NodeId u = static_cast<NodeId>(rng.below(p.num_nodes()));
    const NodeId v = static_cast<NodeId>(rng.below(p.num_nodes()));
    if (p.layer_of(u) <= p.layer_of(v)) EXPECT_EQ(coeff_map(subprogram_poly(p, u, v)), *brute_poly(p, u, v));
  }
}

TEST(Abp, SyntacticMultilinearExamples) {
  EXPECT_TRUE(is_syntactic_multilinear(chain(3, {1, 2, 3})).ok);
  const Abp bad = chain(2, {1, 1});
  const SmCheck c = is_syntactic_multilinear(bad);
  ASSERT_FALSE(c.ok);
  EXPECT_EQ(path_var_seq(bad, c.witness), (std::vector<int>{1, 1}));
}

// Random layered programs with unrestricted labels: checker vs enumeration.
TEST(AbpProperty, MultilinearityCheckMatchesEnumeration) {
  Rng rng(202);
  int rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.between(2, 8);
    const int nl = rng.between(2, 5);
    std::vector<std::vector<NodeId>> layers{{0}};
    NodeId next = 1;
    for (int l = 1; l < nl; ++l) {
      std::vector<NodeId> layer;
      for (int w = rng.between(1, 3); w > 0; --w) layer.push_back(next++);
      layers.push_back(layer);
    }
    layers.push_back({next++});
    std::vector<E> es;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
      for (NodeId b : layers[l + 1]) {
        es.push_back({layers[l][rng.below(layers[l].size())], b, rng.between(0, n)});
      }
      for (NodeId a : layers[l]) {
        es.push_back({a, layers[l + 1][rng.below(layers[l + 1].size())], rng.between(0, n)});
      }
    }
    const Abp p = make_abp(n, layers, es);
    bool oracle = true;
    for (const auto& path : all_paths(p, p.source(), p.sink())) {
      auto seq = path_var_seq(p, path);
      std::sort(seq.begin(), seq.end());
      if (std::adjacent_find(seq.begin(), seq.end()) != seq.end()) oracle = false;
    }
    const SmCheck c = is_syntactic_multilinear(p);
    EXPECT_EQ(c.ok, oracle);
    if (!c.ok) {
      ++rejected;
      EXPECT_FALSE(path_vars(p, c.witness).has_value());
      EXPECT_EQ(p.edge(c.witness.front()).from, p.source());
      EXPECT_EQ(p.edge(c.witness.back()).to, p.sink());
    }
  }
  EXPECT_GT(rejected, 0);
}

TEST(Abp, ClassifyExamples) {
  const Abp roabp = chain(3, {2, 1, 3});
  const Classification c = classify(roabp);
  EXPECT_TRUE(c.oblivious);
  EXPECT_TRUE(c.roabp);
  ASSERT_TRUE(c.l_pass);
  EXPECT_EQ(c.l_pass->count, 1);

  // pi1 = (1,2,3,4) followed by pi2 = (4,3,2,1), one edge per layer
  const Classification two = classify(chain(4, {1, 2, 3, 4, 4, 3, 2, 1}));
  EXPECT_TRUE(two.oblivious);
  EXPECT_FALSE(two.roabp);
  ASSERT_TRUE(two.l_pass);
  EXPECT_EQ(two.l_pass->count, 2);

  EXPECT_FALSE(classify(diamond()).oblivious);
}

TEST(Abp, OrderedExamples) {
  const Abp path = chain(2, {1, 2});
  EXPECT_TRUE(check_ordered(path, {Permutation::identity(2)}).ok);

  const Abp d = diamond();
  const OrderCheck fail = check_ordered(d, {Permutation::identity(2)});
  ASSERT_FALSE(fail.ok);
  EXPECT_EQ(path_var_seq(d, fail.witness), (std::vector<int>{2, 1}));
  EXPECT_TRUE(check_ordered(d, {Permutation::identity(2), Permutation({2, 1})}).ok);
  EXPECT_THROW(validate_orders({Permutation::identity(2), Permutation::identity(2)}, 2), ValidationError);
  EXPECT_THROW(Permutation({1, 1}), ValidationError);
}

TEST(AbpProperty, OrderCheckersAgree) {
  Rng rng(303);
  int ordered = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = rng.between(2, 6);
    const Abp p = random_smabp(rng, SmAbpParams{n, rng.between(2, 6), 3, 20, 35, 15}, kF);
    OrderList orders;
    for (int k = rng.between(1, 3); k > 0; --k) {
      Permutation pi = random_permutation(rng, n);
      if (std::find(orders.begin(), orders.end(), pi) == orders.end()) orders.push_back(pi);
    }
    bool oracle = true;
    for (const auto& path : all_paths(p, p.source(), p.sink())) {
      const auto seq = path_var_seq(p, path);
      bool any = false;
      for (const Permutation& pi : orders) {
        bool inc = true;
        for (std::size_t i = 1; i < seq.size(); ++i) inc = inc && pi.position_of(seq[i - 1]) < pi.position_of(seq[i]);
        any = any || inc;
      }
      oracle = oracle && any;
    }
    EXPECT_EQ(check_ordered_by_enumeration(p, orders).ok, oracle);
    EXPECT_EQ(check_ordered_by_signatures(p, orders).ok, oracle);
    ordered += oracle;
  }
  EXPECT_GT(ordered, 0);
}

TEST(Abp, NormalizeExamples) {
  // already normal: same polynomial and node count
  const Abp d = diamond();
  ASSERT_TRUE(is_normalized(d));
  const Abp nd = normalize(d);
  EXPECT_EQ(nd.num_nodes(), d.num_nodes());
  EXPECT_EQ(abp_poly(nd), abp_poly(d));

  // in-degree 3 at the sink
  const Abp fan = make_abp(3, {{0}, {1, 2, 3}, {4}},
                           {{0, 1, 1}, {0, 2, 2}, {0, 3, 3}, {1, 4, 0}, {2, 4, 0}, {3, 4, 0, 2}});
  EXPECT_FALSE(is_normalized(fan));
  const Abp nf = normalize(fan);
  EXPECT_TRUE(is_normalized(nf));
  EXPECT_EQ(abp_poly(nf), abp_poly(fan));

  // dead branch: node 2 never reaches the sink
  const Abp dead = make_abp(2, {{0}, {1, 2}, {3}}, {{0, 1, 1}, {0, 2, 2}, {1, 3, 2}});
  const Abp nd2 = normalize(dead);
  EXPECT_EQ(abp_poly(nd2), abp_poly(dead));
  EXPECT_LT(nd2.num_nodes(), dead.num_nodes());
}

TEST(AbpProperty, NormalizePreservesPolynomial) {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const Abp p = random_smabp(rng, SmAbpParams{rng.between(2, 10), rng.between(2, 8), 5, 50, 60, 15}, kF);
    const Abp q = normalize(p);
    EXPECT_TRUE(is_normalized(q));
    EXPECT_TRUE(is_syntactic_multilinear(q).ok);
    EXPECT_EQ(abp_poly(q), abp_poly(p));
  }
}

TEST(Paths, CountAndEnumerate) {
  const Abp d = diamond();
  const Segment all{d.source(), d.sink(), std::nullopt};
  EXPECT_EQ(count_paths(d, all), 2u);
  EXPECT_THROW(for_each_path(d, all, 1, [](auto) {}), BudgetExceeded);
  EXPECT_EQ(path_sum_poly(d, all), abp_poly(d));
  EXPECT_TRUE(find_path(d, 1, 3).has_value());
  EXPECT_FALSE(find_path(d, 1, 2).has_value());
}
