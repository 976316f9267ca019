#include "abpkit/interval.hpp"

#include <algorithm>
#include <numeric>

#include "abpkit/errors.hpp"
#include "abpkit/partition.hpp"

namespace abpkit {

CircularInterval::CircularInterval(Permutation p, int s, int l) : pi(std::move(p)), start(s), len(l) {
  if (start < 1 || start > pi.size()) throw ValidationError("interval start outside 1..n");
  if (len < 0 || len > pi.size()) throw ValidationError("interval length outside 0..n");
}

Monomial CircularInterval::members() const {
  Monomial m = 0;
  for (int k = 0; k < len; ++k) m |= var_bit(pi.at(position(k)));
  return m;
}

bool overlaps(const CircularInterval& i, const CircularInterval& j) {
  if (!(i.pi == j.pi)) throw ValidationError("intervals over different permutations");
  if (i.degenerate() || j.degenerate()) return false;
  const int n = i.n();
  const int a1 = i.start, a2 = i.position(i.len - 1);
  const int b1 = j.start, b2 = j.position(j.len - 1);
  if (a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2) return false;
  auto inside = [&](int q) {
    const int offset = ((q - a1) % n + n) % n;  // steps from a1 along the arc
    return offset > 0 && offset < i.len - 1;
  };
  return inside(b1) != inside(b2);
}

std::vector<CircularInterval> minimal_covers(Monomial s, const Permutation& pi) {
  if (s == 0) throw DegenerateInputError("cannot cover an empty variable set");
  const int n = pi.size();
  std::vector<int> pos;
  for (Monomial m = s; m; m &= m - 1) {
    const int v = __builtin_ctzll(m) + 1;
    if (v > n) throw DimensionError("variable outside the permutation");
    pos.push_back(pi.position_of(v));
  }
  std::sort(pos.begin(), pos.end());
  const int k = static_cast<int>(pos.size());
  if (k == n) return {CircularInterval(pi, 1, n)};
  // Gap after pos[j]: positions strictly between pos[j] and the next member.
  int best = -1;
  std::vector<int> starts;
  for (int j = 0; j < k; ++j) {
    const int next = j + 1 < k ? pos[static_cast<std::size_t>(j + 1)] : pos[0] + n;
    const int gap = next - pos[static_cast<std::size_t>(j)] - 1;
    const int start = (next - 1) % n + 1;
    if (gap > best) {
      best = gap;
      starts.assign(1, start);
    } else if (gap == best) {
      starts.push_back(start);
    }
  }
  std::sort(starts.begin(), starts.end());
  std::vector<CircularInterval> out;
  for (int st : starts) out.emplace_back(pi, st, n - best);
  return out;
}

IntervalCheck check_strict_circular_interval(const Abp& p, const Permutation& pi, std::uint64_t search_cap) {
  if (pi.size() != p.nvars()) throw DimensionError("permutation size differs from variable count");
  const std::size_t N = p.num_nodes();
  // reach[u][v] and X[u][v] for every ordered pair, one forward sweep per u.
  std::vector<std::vector<char>> reach(N, std::vector<char>(N, 0));
  std::vector<std::vector<Monomial>> X(N, std::vector<Monomial>(N, 0));
  std::vector<NodeId> topo;
  for (const auto& layer : p.layers()) topo.insert(topo.end(), layer.begin(), layer.end());
  for (NodeId u = 0; u < N; ++u) {
    reach[u][u] = 1;
    for (NodeId a : topo) {
      if (!reach[u][a]) continue;
      for (EdgeIndex e : p.out_edges(a)) {
        const Edge& edge = p.edges()[e];
        reach[u][edge.to] = 1;
        X[u][edge.to] |= X[u][a] | edge.label.vars();
      }
    }
  }

  // Candidate covers per pair with nonempty X.
  std::vector<std::vector<int>> pair_id(N, std::vector<int>(N, -1));
  std::vector<std::vector<CircularInterval>> cands;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < N; ++u) {
    for (NodeId v = 0; v < N; ++v) {
      if (u == v || !reach[u][v] || X[u][v] == 0) continue;
      pair_id[u][v] = static_cast<int>(pairs.size());
      pairs.emplace_back(u, v);
      cands.push_back(minimal_covers(X[u][v], pi));
    }
  }
  const std::size_t P = pairs.size();
  std::vector<int> choice(P, -1);
  for (std::size_t k = 0; k < P; ++k) {
    if (cands[k].size() == 1) choice[k] = 0;
  }

  IntervalCheck result;
  auto violated = [&](std::size_t first, std::size_t second) {
    return overlaps(cands[first][static_cast<std::size_t>(choice[first])],
                    cands[second][static_cast<std::size_t>(choice[second])]);
  };
  // Pair k against every assigned pair composed with it.
  auto consistent = [&](std::size_t k) -> std::optional<std::pair<std::size_t, std::size_t>> {
    const auto [u, v] = pairs[k];
    for (NodeId w = 0; w < N; ++w) {
      const int after = pair_id[v][w];
      if (after >= 0 && choice[static_cast<std::size_t>(after)] >= 0 && violated(k, static_cast<std::size_t>(after))) {
        return std::make_pair(k, static_cast<std::size_t>(after));
      }
      const int before = pair_id[w][u];
      if (before >= 0 && choice[static_cast<std::size_t>(before)] >= 0 &&
          violated(static_cast<std::size_t>(before), k)) {
        return std::make_pair(static_cast<std::size_t>(before), k);
      }
    }
    return std::nullopt;
  };
  auto witness_of = [&](std::size_t first, std::size_t second) {
    IntervalWitness w;
    w.u = pairs[first].first;
    w.a = pairs[first].second;
    w.v = pairs[second].second;
    w.interval_ua = cands[first][static_cast<std::size_t>(choice[first])];
    w.interval_av = cands[second][static_cast<std::size_t>(choice[second])];
    return w;
  };

  for (std::size_t k = 0; k < P; ++k) {
    if (cands[k].size() != 1) continue;
    if (auto bad = consistent(k)) {
      result.ok = false;
      result.witness = witness_of(bad->first, bad->second);
      return result;
    }
  }

  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < P; ++k) {
    if (cands[k].size() > 1) open.push_back(k);
  }
  // Depth-first search over the pairs with several shortest covers.
  std::size_t depth = 0;
  while (depth < open.size()) {
    const std::size_t k = open[depth];
    bool placed = false;
    while (static_cast<std::size_t>(choice[k] + 1) < cands[k].size()) {
      ++choice[k];
      if (++result.search_nodes > search_cap) {
        throw BudgetExceeded("circular-interval search exceeded cap", result.search_nodes);
      }
      if (!consistent(k)) {
        placed = true;
        break;
      }
    }
    if (placed) {
      ++depth;
      continue;
    }
    choice[k] = -1;
    if (depth == 0) {
      // No assignment works; report a violation of the first-candidate assignment.
      for (std::size_t q : open) choice[q] = 0;
      for (std::size_t q : open) {
        if (auto bad = consistent(q)) {
          result.ok = false;
          result.witness = witness_of(bad->first, bad->second);
          return result;
        }
      }
      throw InternalContradiction("interval search failed without a violated composition");
    }
    --depth;
  }
  return result;
}

std::optional<Permutation> find_circular_interval_order(const Abp& p, std::uint64_t search_cap) {
  const int n = p.nvars();
  if (n > 8) throw BudgetExceeded("exhaustive order search limited to n <= 8", 0);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  if (n == 0) return std::nullopt;
  do {
    Permutation pi(order);
    if (check_strict_circular_interval(p, pi, search_cap).ok) return pi;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return std::nullopt;
}

BichromaticCensus bichromatic_census(const Formula& f, const Permutation& pi) {
  const Partition phi = partition_from_permutation(pi);
  if (phi.nvars() != f.nvars()) throw DimensionError("permutation size differs from variable count");
  BichromaticCensus c;
  c.max_bichromatic = max_over_parse_trees(f, [&](std::uint32_t g) -> std::int64_t {
    return chromatic_class(leaf_vars(f, g), phi) == Chromatic::Bichromatic;
  });
  c.parse_trees = count_parse_trees(f);
  return c;
}

BichromaticCensus bichromatic_census(const Abp& p, const Permutation& pi, const FormulaOptions& options) {
  return bichromatic_census(abp_to_formula(p, options), pi);
}

}  // namespace abpkit
