#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "abpkit/errors.hpp"
#include "abpkit/formula.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/rng.hpp"
#include "support.hpp"

using namespace abpkit;
using namespace testing_support;

namespace {

Abp random_normal(Rng& rng, int n_lo, int n_hi, int max_nodes) {
  for (;;) {
    const int n = rng.between(n_lo, n_hi);
    Abp p = normalize(random_smabp(rng, SmAbpParams{n, rng.between(2, n + 2), 4, max_nodes, 40, 15}, kF));
    if (subprogram_vars(p, p.source(), p.sink()) != 0) return p;
  }
}

// Leaves are only referenced by Plus/Times gates, so a hand-made formula over
// a chain lets the parse-tree code be checked against known counts.
Formula plus_of_leaves(int k) {
  auto p = std::make_shared<const Abp>(chain(k, [k] {
    std::vector<int> v;
    for (int i = 1; i <= k; ++i) v.push_back(i);
    return v;
  }()));
  std::vector<Gate> gates;
  Gate plus{Gate::Kind::Plus, {}, {}, {}};
  for (int i = 0; i < k; ++i) {
    gates.push_back({Gate::Kind::Leaf, {}, {Segment{static_cast<NodeId>(i), static_cast<NodeId>(i + 1), std::nullopt}}, {}});
    plus.children.push_back(static_cast<std::uint32_t>(i));
  }
  gates.push_back(plus);
  return Formula(p, leaf_arity_bound(k), gates, static_cast<std::uint32_t>(k), false);
}

Monomial leaf_or_sub_vars(const Formula& f, std::uint32_t g) {
  const Gate& gate = f.gate(g);
  if (gate.kind == Gate::Kind::Leaf || gate.kind == Gate::Kind::Const) return leaf_vars(f, g);
  Monomial m = 0;
  for (std::uint32_t c : gate.children) m |= leaf_or_sub_vars(f, c);
  return m;
}

}  // namespace

TEST(Formula, LeafArityBoundIsCeilSqrt) {
  for (int n = 1; n <= 64; ++n) {
    const int t = leaf_arity_bound(n);
    EXPECT_GE(t * t, n);
    EXPECT_LT((t - 1) * (t - 1), n);
  }
  EXPECT_EQ(leaf_arity_bound(16), 4);
  EXPECT_EQ(leaf_arity_bound(17), 5);
}

TEST(Formula, SmallProgramIsOneLeaf) {
  const Abp p = chain(9, {4, 7});
  const Formula f = abp_to_formula(p);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.gate(f.root()).kind, Gate::Kind::Leaf);
  EXPECT_EQ(count_parse_trees(f), 1u);
  EXPECT_EQ(parse_tree_leaf_stats(f).max_leaves, 1);
  const Depth4Form d = flatten_depth4(f);
  ASSERT_EQ(d.products.size(), 1u);
  EXPECT_EQ(d.products[0].factors.size(), 1u);
}

TEST(Formula, HandBuiltEvaluation) {
  auto p = std::make_shared<const Abp>(chain(2, {1, 2}));
  std::vector<Gate> gates{{Gate::Kind::Leaf, {}, {Segment{0, 1, std::nullopt}}, {}},
                          {Gate::Kind::Leaf, {}, {Segment{1, 2, std::nullopt}}, {}},
                          {Gate::Kind::Times, {0, 1}, {}, {}},
                          {Gate::Kind::Const, {}, {}, Fe{5}},
                          {Gate::Kind::Plus, {2, 3}, {}, {}}};
  const Formula f(p, 2, gates, 4, false);
  EXPECT_EQ(leaf_poly(f, 3), MultilinearPoly::constant(2, kF, Fe{5}));
  EXPECT_EQ(formula_poly(f), poly_of(2, {{{1, 2}, 1}, {{}, 5}}));
  const std::vector<Fe> pt{Fe{3}, Fe{4}};
  EXPECT_EQ(formula_eval(f, pt), Fe{17});
  EXPECT_EQ(count_parse_trees(f), 2u);
  // children must precede parents
  std::vector<Gate> bad{{Gate::Kind::Times, {1, 2}, {}, {}}, gates[0], gates[1]};
  EXPECT_THROW(Formula(p, 2, bad, 0, false), ValidationError);
}

TEST(Formula, PlusOfKLeavesHasKParseTrees) {
  for (int k = 1; k <= 6; ++k) {
    const Formula f = plus_of_leaves(k);
    EXPECT_EQ(count_parse_trees(f), static_cast<std::uint64_t>(k));
    std::uint64_t seen = 0;
    enumerate_parse_trees(f, 100, [&](const ParseTree& t) {
      EXPECT_EQ(t.leaves.size(), 1u);
      ++seen;
    });
    EXPECT_EQ(seen, static_cast<std::uint64_t>(k));
  }
  EXPECT_THROW(enumerate_parse_trees(plus_of_leaves(5), 3, [](const ParseTree&) {}), BudgetExceeded);
}

TEST(FormulaProperty, ExactEqualityAndStructure) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Abp p = random_normal(rng, 4, 16, 60);
    const Formula f = abp_to_formula(p);
    EXPECT_EQ(formula_poly(f), abp_poly(p));
    const FormulaInvariants inv = check_formula_invariants(f);
    EXPECT_TRUE(inv.ok());
    const int tau = leaf_arity_bound(p.nvars());
    for (std::uint32_t g = 0; g < f.size(); ++g) {
      const Gate& gate = f.gate(g);
      if (gate.kind == Gate::Kind::Leaf) EXPECT_LE(degree(leaf_vars(f, g)), tau);
      if (gate.kind == Gate::Kind::Times) {
        EXPECT_EQ(leaf_or_sub_vars(f, gate.children[0]) & leaf_or_sub_vars(f, gate.children[1]), Monomial{0});
      }
    }
    EXPECT_LE(formula_depth(f), formula_depth_bound(p.nvars()));
    EXPECT_TRUE(formula_matches_abp_randomized(f, 5));
  }
}

TEST(FormulaProperty, SharedModeAgrees) {
  Rng rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const Abp p = random_normal(rng, 4, 14, 60);
    FormulaOptions opt;
    opt.share_subformulas = true;
    const Formula shared = abp_to_formula(p, opt);
    const Formula tree = abp_to_formula(p);
    EXPECT_LE(shared.size(), tree.size());
    EXPECT_EQ(formula_poly(shared), abp_poly(p));
    EXPECT_EQ(count_parse_trees(shared), count_parse_trees(tree));
    const Formula expanded = unshare(shared);
    EXPECT_FALSE(expanded.shared());
    EXPECT_EQ(formula_poly(expanded), abp_poly(p));
    if (shared.shared()) EXPECT_THROW(ParseTreeCursor{shared}, ValidationError);
  }
}

TEST(Formula, GateBudget) {
  Rng rng(33);
  const Abp p = random_normal(rng, 12, 12, 60);
  FormulaOptions opt;
  opt.max_gates = 2;
  EXPECT_THROW(abp_to_formula(p, opt), BudgetExceeded);
}

// Sum over parse trees of the product of leaf polynomials equals the formula.
TEST(ParseTreeProperty, ParseTreeSumAndLeafCounts) {
  Rng rng(34);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Abp p = random_normal(rng, 4, 12, 40);
    const Formula f = abp_to_formula(p);
    const std::uint64_t count = count_parse_trees(f);
    if (count > 20000) continue;
    ++checked;
    MultilinearPoly sum(p.nvars(), kF);
    std::uint64_t seen = 0;
    std::int64_t max_leaves = 0;
    enumerate_parse_trees(f, count, [&](const ParseTree& t) {
      sum = sum + parse_tree_value(f, t);
      std::int64_t nonconst = 0;
      for (std::uint32_t g : t.leaves) nonconst += leaf_vars(f, g) != 0;
      max_leaves = std::max(max_leaves, nonconst);
      ++seen;
    });
    EXPECT_EQ(seen, count);
    EXPECT_EQ(sum, formula_poly(f));
    const LeafStats stats = parse_tree_leaf_stats(f);
    EXPECT_EQ(stats.max_leaves, max_leaves);
    EXPECT_EQ(stats.bound, 3 * leaf_arity_bound(p.nvars()));
    EXPECT_TRUE(stats.within_bound());
  }
  EXPECT_GT(checked, 30);
}

TEST(ParseTreeProperty, LeafBoundAtSixteenAndNine) {
  Rng rng(35);
  for (int n : {9, 16}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Abp p = random_normal(rng, n, n, 80);
      const LeafStats s = parse_tree_leaf_stats(abp_to_formula(p));
      EXPECT_LE(s.max_leaves, n == 16 ? 12 : 9);
    }
  }
}

TEST(Depth4Property, FlattenedFormMatches) {
  Rng rng(36);
  int checked = 0;
  for (int trial = 0; trial < 80 && checked < 50; ++trial) {
    const Abp p = random_normal(rng, 3, 12, 40);
    const Formula f = abp_to_formula(p);
    if (count_parse_trees(f) > 5000) continue;
    ++checked;
    const Depth4Form d = flatten_depth4(f);
    EXPECT_EQ(depth4_poly(d), abp_poly(p));
    const int tau = leaf_arity_bound(p.nvars());
    for (const Depth4Product& prod : d.products) {
      EXPECT_LE(prod.factors.size(), static_cast<std::size_t>(3 * tau));
      for (std::size_t i = 0; i < prod.factors.size(); ++i) {
        EXPECT_LE(degree(prod.factor_vars[i]), tau);
        EXPECT_EQ(prod.factors[i].support() & ~prod.factor_vars[i], Monomial{0});
      }
    }
    std::vector<Fe> pt(static_cast<std::size_t>(p.nvars()));
    for (Fe& x : pt) x = kF.from_u64(rng.next());
    EXPECT_EQ(depth4_eval(d, pt), abp_eval(p, pt));
  }
  EXPECT_EQ(checked, 50);
}
