#include <gtest/gtest.h>

#include <cmath>

#include "abpkit/errors.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/interval.hpp"
#include "abpkit/rng.hpp"
#include "support.hpp"

using namespace abpkit;
using namespace testing_support;

namespace {

// Arc with the given 1-based positions, listed in circle order.
CircularInterval arc(const Permutation& pi, int start, int len) { return CircularInterval(pi, start, len); }

// Straight-segment intersection of the two chords drawn between arc endpoints.
bool chords_cross_geometric(int n, int a1, int a2, int b1, int b2) {
  if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) return false;
  auto pt = [n](int k) { return std::pair{std::cos(2 * M_PI * k / n), std::sin(2 * M_PI * k / n)}; };
  auto orient = [](auto p, auto q, auto r) {
    const double v = (q.first - p.first) * (r.second - p.second) - (q.second - p.second) * (r.first - p.first);
    return v > 0 ? 1 : -1;
  };
  const auto p1 = pt(a1), p2 = pt(a2), q1 = pt(b1), q2 = pt(b2);
  return orient(p1, p2, q1) != orient(p1, p2, q2) && orient(q1, q2, p1) != orient(q1, q2, p2);
}

}  // namespace

TEST(Interval, OverlapExamples) {
  const Permutation id = Permutation::identity(6);
  EXPECT_TRUE(overlaps(arc(id, 1, 3), arc(id, 2, 4)));
  EXPECT_FALSE(overlaps(arc(id, 1, 2), arc(id, 3, 2)));
  EXPECT_FALSE(overlaps(arc(id, 1, 4), arc(id, 2, 2)));
  EXPECT_THROW(overlaps(arc(id, 1, 3), arc(Permutation({2, 1, 3, 4, 5, 6}), 2, 3)), ValidationError);
  EXPECT_THROW(CircularInterval(id, 7, 1), ValidationError);
}

TEST(IntervalProperty, OverlapMatchesChordGeometry) {
  for (int n = 4; n <= 9; ++n) {
    const Permutation id = Permutation::identity(n);
    for (int s1 = 1; s1 <= n; ++s1)
      for (int l1 = 0; l1 <= n; ++l1)
        for (int s2 = 1; s2 <= n; ++s2)
          for (int l2 = 0; l2 <= n; ++l2) {
            const CircularInterval i = arc(id, s1, l1), j = arc(id, s2, l2);
            bool expected = false;
            if (!i.degenerate() && !j.degenerate()) {
              expected = chords_cross_geometric(n, i.position(0), i.position(l1 - 1), j.position(0),
                                                j.position(l2 - 1));
            }
            ASSERT_EQ(overlaps(i, j), expected) << n << ": " << s1 << "+" << l1 << " vs " << s2 << "+" << l2;
            ASSERT_EQ(overlaps(i, j), overlaps(j, i));
          }
  }
}

TEST(Interval, MinimalCoverExamples) {
  const Permutation pi({3, 5, 1, 6, 2, 4});
  auto covers = minimal_covers(var_bit(pi.at(2)), pi);
  ASSERT_EQ(covers.size(), 1u);
  EXPECT_EQ(covers[0], arc(pi, 2, 1));

  covers = minimal_covers(var_bit(pi.at(1)) | var_bit(pi.at(3)), pi);
  ASSERT_EQ(covers.size(), 1u);
  EXPECT_EQ(covers[0], arc(pi, 1, 3));

  const Monomial block = var_bit(pi.at(5)) | var_bit(pi.at(6)) | var_bit(pi.at(1));
  covers = minimal_covers(block, pi);
  ASSERT_EQ(covers.size(), 1u);
  EXPECT_EQ(covers[0].members(), block);
  EXPECT_EQ(covers[0].len, 3);

  EXPECT_EQ(minimal_covers(all_vars(6), pi).size(), 1u);
  EXPECT_THROW(minimal_covers(0, pi), DegenerateInputError);
}

TEST(IntervalProperty, MinimalCoversMatchArcEnumeration) {
  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.between(2, 9);
    const Permutation pi = random_permutation(rng, n);
    const Monomial s = rng.next() & all_vars(n);
    if (s == 0 || s == all_vars(n)) continue;
    std::vector<CircularInterval> expected;
    int best = n + 1;
    for (int len = 1; len <= n && expected.empty(); ++len) {
      for (int start = 1; start <= n; ++start) {
        const CircularInterval c = arc(pi, start, len);
        if ((c.members() & s) == s) expected.push_back(c);
      }
      if (!expected.empty()) best = len;
    }
    const auto got = minimal_covers(s, pi);
    EXPECT_EQ(got, expected) << "best length " << best;
  }
}

TEST(IntervalCheck, ContiguousChain) {
  const Abp p = chain(6, {1, 2, 3, 4, 5, 6});
  EXPECT_TRUE(check_strict_circular_interval(p, Permutation::identity(6)).ok);
}

TEST(IntervalCheck, CrossingChordsGiveTriple) {
  const Abp p = chain(6, {1, 3, 2, 5});
  const IntervalCheck c = check_strict_circular_interval(p, Permutation::identity(6));
  ASSERT_FALSE(c.ok);
  ASSERT_TRUE(c.witness.has_value());
  const IntervalWitness& w = *c.witness;
  EXPECT_LT(p.layer_of(w.u), p.layer_of(w.a));
  EXPECT_LT(p.layer_of(w.a), p.layer_of(w.v));
  ASSERT_TRUE(w.interval_ua && w.interval_av);
  EXPECT_TRUE(overlaps(*w.interval_ua, *w.interval_av));
  EXPECT_EQ(w.interval_ua->members() & subprogram_vars(p, w.u, w.a), subprogram_vars(p, w.u, w.a));
  EXPECT_EQ(w.interval_av->members() & subprogram_vars(p, w.a, w.v), subprogram_vars(p, w.a, w.v));
}

// Width-2 programs for (1 + x1 x4)(1 + x2 x3) and (1 + x1 x2)(1 + x3 x4), read in
// order x1..x4 and joined at the source and sink (w = 1).
TEST(IntervalCheck, FourVariableFullRankProgram) {
  std::vector<E> es;
  const NodeId s = 0;
  const NodeId a0 = 1, a1 = 2, b0 = 3, b1 = 4;                       // layer 1
  const NodeId a00 = 5, a01 = 6, a10 = 7, a11 = 8, bc = 9;          // layer 2
  const NodeId a0c = 10, a1c = 11, b3_0 = 12, b3_1 = 13;            // layer 3
  const NodeId t = 14;
  es = {{s, a0, 0}, {s, a1, 1}, {s, b0, 0}, {s, b1, 1},
        {a0, a00, 0}, {a0, a01, 2}, {a1, a10, 0}, {a1, a11, 2}, {b0, bc, 0}, {b1, bc, 2},
        {a00, a0c, 0}, {a01, a0c, 3}, {a10, a1c, 0}, {a11, a1c, 3}, {bc, b3_0, 0}, {bc, b3_1, 3},
        {a0c, t, 0}, {a1c, t, 4}, {b3_0, t, 0}, {b3_1, t, 4}};
  const Abp p = make_abp(4, {{s}, {a0, a1, b0, b1}, {a00, a01, a10, a11, bc}, {a0c, a1c, b3_0, b3_1}, {t}}, es);
  const auto expected = poly_of(4, {{{}, 1}, {{1, 4}, 1}}) * poly_of(4, {{{}, 1}, {{2, 3}, 1}}) +
                        poly_of(4, {{{}, 1}, {{1, 2}, 1}}) * poly_of(4, {{{}, 1}, {{3, 4}, 1}});
  ASSERT_EQ(abp_poly(p), expected);
  EXPECT_TRUE(check_strict_circular_interval(p, Permutation::identity(4)).ok);
}

TEST(IntervalCheck, SearchFindsAnOrder) {
  const Abp p = chain(5, {3, 1, 4, 2, 5});
  const auto pi = find_circular_interval_order(p);
  ASSERT_TRUE(pi.has_value());
  EXPECT_EQ(pi->at(1), 1);
  EXPECT_TRUE(check_strict_circular_interval(p, *pi).ok);
}

TEST(Bichromatic, SmallCases) {
  const Permutation id = Permutation::identity(4);
  EXPECT_EQ(bichromatic_census(chain(4, {1, 2}), id).max_bichromatic, 0);
  const BichromaticCensus straddle = bichromatic_census(chain(4, {2, 3}), id);
  EXPECT_GE(straddle.max_bichromatic, 1);
  EXPECT_LE(straddle.max_bichromatic, 2);
}

TEST(BichromaticProperty, RotatedRoabps) {
  Rng rng(52);
  int accepted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 * rng.between(2, 6);
    const CircularInstance inst = random_rotated_roabp(rng, CircularParams{n, 3, 35, 10}, kF);
    const Abp p = normalize(inst.abp);
    if (subprogram_vars(p, p.source(), p.sink()) == 0) continue;
    if (!check_strict_circular_interval(p, inst.pi).ok) continue;
    ++accepted;
    EXPECT_LE(bichromatic_census(p, inst.pi).max_bichromatic, 2);
  }
  EXPECT_GT(accepted, 30);
}
