#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abpkit/abp.hpp"
#include "abpkit/formula.hpp"

namespace abpkit {

/// Arc of positions start, start+1, ... (len of them, wrapping mod n) on the
/// circle ordered by pi; its members are the variables at those positions.
struct CircularInterval {
  Permutation pi;
  int start = 1;  // 1-based position
  int len = 0;

  /// Throws ValidationError on start outside 1..n or len outside 0..n.
  CircularInterval(Permutation pi, int start, int len);

  int n() const noexcept { return pi.size(); }
  /// Position of the k-th element of the arc, k = 0..len-1.
  int position(int k) const { return (start - 1 + k) % n() + 1; }
  Monomial members() const;
  /// Proper chord: 2 <= len <= n-2. Other arcs never overlap anything.
  bool degenerate() const noexcept { return len <= 1 || len >= n() - 1; }

  friend bool operator==(const CircularInterval& a, const CircularInterval& b) {
    return a.pi == b.pi && a.start == b.start && a.len == b.len;
  }
};

/// Chords cross: they share no endpoint and exactly one endpoint of J lies
/// strictly inside I's arc. Throws ValidationError on a different pi.
bool overlaps(const CircularInterval& i, const CircularInterval& j);

/// All shortest arcs containing S (the complements of its largest circular
/// gaps), ordered by start. The whole circle is returned once. Throws
/// DegenerateInputError on empty S.
std::vector<CircularInterval> minimal_covers(Monomial s, const Permutation& pi);

struct IntervalWitness {
  NodeId u = 0, a = 0, v = 0;
  std::optional<CircularInterval> interval_ua, interval_av;
};

struct IntervalCheck {
  bool ok = true;
  std::optional<IntervalWitness> witness;
  std::uint64_t search_nodes = 0;
};

/// Searches an assignment of minimal covers to node pairs (u,v) with
/// nonempty X_{u,v} such that no composition u -> a -> v has overlapping
/// intervals. Throws BudgetExceeded after `search_cap` backtracking steps.
IntervalCheck check_strict_circular_interval(const Abp& p, const Permutation& pi,
                                             std::uint64_t search_cap = 1'000'000);

/// Tries every pi with pi(1) = 1 (the property is invariant under rotation). n <= 8.
std::optional<Permutation> find_circular_interval_order(const Abp& p, std::uint64_t search_cap = 1'000'000);

struct BichromaticCensus {
  std::int64_t max_bichromatic = 0;  // over parse trees of the formula
  std::uint64_t parse_trees = 0;
  bool ok() const { return max_bichromatic <= 2; }
};

/// Leaves whose variable set meets both halves of the partition read off pi.
BichromaticCensus bichromatic_census(const Formula& f, const Permutation& pi);
BichromaticCensus bichromatic_census(const Abp& p, const Permutation& pi, const FormulaOptions& options = {});

}  // namespace abpkit
