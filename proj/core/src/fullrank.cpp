#include "abpkit/fullrank.hpp"

#include <numeric>
#include <optional>
#include <string>

#include "abpkit/abp.hpp"
#include "abpkit/errors.hpp"
#include "abpkit/partition.hpp"
#include "abpkit/rng.hpp"

namespace abpkit {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Monomial interval_mask(int i, int j) {
  Monomial m = 0;
  for (int v = i; v <= j; ++v) m |= var_bit(v);
  return m;
}

class Generator {
 public:
  Generator(const FullRankSpec& spec, const PrimeField& field, std::size_t max_terms)
      : spec_(spec), field_(field), max_terms_(max_terms), memo_(static_cast<std::size_t>(spec.n + 2)) {
    for (auto& row : memo_) row.resize(static_cast<std::size_t>(spec.n + 2));
  }

  FullRankResult run() {
    const MultilinearPoly& g = get(1, spec_.n);
    FullRankResult r{g, std::move(w_used_), {}};
    for (int i = 1; i <= spec_.n + 1; ++i) {
      for (int j = i - 1; j <= spec_.n; ++j) {
        if (memo_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) r.touched[{i, j}] = touched_[{i, j}];
      }
    }
    return r;
  }

 private:
  Fe w(const WKey& key) {
    Fe value;
    if (const auto* ex = std::get_if<WExplicit>(&spec_.w)) {
      auto it = ex->values.find(key);
      if (it == ex->values.end()) {
        throw LookupError("missing w_{" + std::to_string(std::get<0>(key)) + "," + std::to_string(std::get<1>(key)) +
                          "," + std::to_string(std::get<2>(key)) + "}");
      }
      value = it->second;
    } else {
      value = random_w(std::get<WRandom>(spec_.w).seed, key, field_);
    }
    w_used_[key] = value;
    return value;
  }

  const MultilinearPoly& get(int i, int j) {
    auto& slot = memo_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (slot) return *slot;
    std::set<WKey>& keys = touched_[{i, j}];
    if (j < i) {
      slot = MultilinearPoly::constant(spec_.n, field_, field_.one());
      return *slot;
    }
    if ((j - i + 1) % 2 != 0) throw InternalContradiction("odd interval reached in full-rank recursion");
    MultilinearPoly pair = MultilinearPoly::from_terms(
        spec_.n, field_, {Term{0, field_.one()}, Term{var_bit(i) | var_bit(j), field_.one()}});
    MultilinearPoly acc = poly_mul(pair, get(i + 1, j - 1));
    keys.insert(touched_[{i + 1, j - 1}].begin(), touched_[{i + 1, j - 1}].end());
    for (int k = i + 1; k <= j - 2; ++k) {
      if ((k - i + 1) % 2 != 0) continue;
      const WKey key{i, k, j};
      const Fe wv = w(key);
      keys.insert(key);
      const MultilinearPoly& left = get(i, k);
      const MultilinearPoly& right = get(k + 1, j);
      acc = poly_add(acc, poly_scale(poly_mul(left, right), wv));
      keys.insert(touched_[{i, k}].begin(), touched_[{i, k}].end());
      keys.insert(touched_[{k + 1, j}].begin(), touched_[{k + 1, j}].end());
      if (acc.size() > max_terms_) throw BudgetExceeded("full-rank polynomial term blowup", acc.size());
    }
    if (acc.support() & ~interval_mask(i, j)) {
      throw InternalContradiction("g_{i,j} reads a variable outside its interval");
    }
    for (const WKey& key : keys) {
      const auto [a, b, c] = key;
      if (a < i || b < i || c < i || a > j || b > j || c > j) {
        throw InternalContradiction("g_{i,j} depends on a w outside its interval");
      }
    }
    slot = std::move(acc);
    return *slot;
  }

  const FullRankSpec& spec_;
  PrimeField field_;
  std::size_t max_terms_;
  std::vector<std::vector<std::optional<MultilinearPoly>>> memo_;
  std::map<std::pair<int, int>, std::set<WKey>> touched_;
  std::map<WKey, Fe> w_used_;
};

}  // namespace

Fe random_w(std::uint64_t seed, const WKey& key, const PrimeField& field) {
  const auto [i, k, j] = key;
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint64_t>(i));
  h = splitmix(h ^ (static_cast<std::uint64_t>(k) << 20));
  h = splitmix(h ^ (static_cast<std::uint64_t>(j) << 40));
  Rng rng(h);
  return Fe{rng.below(field.prime())};
}

FullRankResult gen_fullrank(const FullRankSpec& spec, const PrimeField& field, std::size_t max_terms) {
  if (spec.n < 0 || spec.n % 2 != 0) throw DimensionError("full-rank polynomial needs an even n");
  if (spec.n > 20) throw BudgetExceeded("full-rank polynomial limited to n <= 20", 0);
  return Generator(spec, field, max_terms).run();
}

FullRankCheck fullrank_rank_check(int n, int partitions, std::uint64_t seed, int perm_partitions,
                                  const PrimeField& field) {
  if (n < 0 || n % 2 != 0) throw DimensionError("full-rank polynomial needs an even n");
  if (n > 16) throw BudgetExceeded("rank check limited to n <= 16", 0);
  Rng rng(seed);
  std::vector<Partition> phis;
  for (int t = 0; t < partitions; ++t) phis.push_back(sample_partition(n, rng.next()));
  for (int t = 0; t < perm_partitions; ++t) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 1);
    rng.shuffle(order);
    phis.push_back(partition_from_permutation(Permutation(std::move(order))));
  }
  FullRankCheck check;
  check.n = n;
  check.expected = 1 << (n / 2);
  std::uint64_t w_seed = rng.next();
  for (int attempt = 1; attempt <= 2; ++attempt) {
    const MultilinearPoly g = gen_fullrank(FullRankSpec{n, WRandom{w_seed}}, field).g;
    check.ranks.clear();
    bool all = true;
    for (const Partition& phi : phis) {
      check.ranks.push_back(rank_phi(g, phi));
      all = all && check.ranks.back() == check.expected;
    }
    check.attempts = attempt;
    check.w_seed = w_seed;
    if (all) {
      check.ok = true;
      break;
    }
    w_seed = rng.next();
  }
  return check;
}

}  // namespace abpkit
