#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <variant>
#include <vector>

#include "abpkit/poly.hpp"

namespace abpkit {

/// Key (i, k, j) of a w-variable.
using WKey = std::tuple<int, int, int>;

struct WRandom {
  std::uint64_t seed = 0;
};
struct WExplicit {
  std::map<WKey, Fe> values;  // a missing key needed by the recursion throws LookupError
};

struct FullRankSpec {
  int n = 0;
  std::variant<WRandom, WExplicit> w = WRandom{};
};

struct FullRankResult {
  MultilinearPoly g;
  /// Every w value substituted, keyed by (i, k, j).
  std::map<WKey, Fe> w_used;
  /// For each memoised interval (i, j): the w keys its polynomial depends on.
  std::map<std::pair<int, int>, std::set<WKey>> touched;
};

/// g_{1,n} with g_{i,j} = (1 + x_i x_j) g_{i+1,j-1} + sum_k w_{i,k,j} g_{i,k} g_{k+1,j},
/// k over [i+1, j-2] with k - i + 1 even, g = 1 on empty intervals. Throws
/// DimensionError on odd n, BudgetExceeded past n = 20 or max_terms terms in one g_{i,j}.
/// Asserts vars(g_{i,j}) within x_i..x_j and touched keys within [i,j] (InternalContradiction).
FullRankResult gen_fullrank(const FullRankSpec& spec, const PrimeField& field = PrimeField{},
                            std::size_t max_terms = 2'000'000);

/// Deterministic w value for a key under a seed (independent of evaluation order).
Fe random_w(std::uint64_t seed, const WKey& key, const PrimeField& field);

struct FullRankCheck {
  int n = 0;
  int expected = 0;  // 2^{n/2}
  std::vector<int> ranks;  // final attempt: sampled partitions, then permutation partitions
  int attempts = 0;  // 1, or 2 after a reseed
  std::uint64_t w_seed = 0;  // seed of the final attempt
  bool ok = false;
};

/// Samples `partitions` partitions and `perm_partitions` partitions from random
/// permutations, all from `seed`; requires rank 2^{n/2} under each. On failure
/// retries once with a fresh w seed. n <= 16.
FullRankCheck fullrank_rank_check(int n, int partitions, std::uint64_t seed, int perm_partitions = 10,
                                  const PrimeField& field = PrimeField{});

}  // namespace abpkit
