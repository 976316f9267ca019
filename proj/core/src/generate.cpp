#include "abpkit/generate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "abpkit/errors.hpp"

namespace abpkit {

namespace {

// Internal layer widths with the node budget respected; every layer gets at least one node.
std::vector<int> layer_widths(Rng& rng, int inner_layers, int max_width, int budget) {
  if (inner_layers > budget) throw ValidationError("node budget smaller than the number of layers");
  std::vector<int> w(static_cast<std::size_t>(inner_layers), 1);
  int spare = budget - inner_layers;
  for (int& x : w) {
    const int extra = std::min(spare, rng.between(0, max_width - 1));
    x += extra;
    spare -= extra;
  }
  return w;
}

Fe small_const(Rng& rng, const PrimeField& field) {
  const int c = rng.between(1, 4);
  return c == 4 ? field.neg(field.one()) : field.from_u64(static_cast<std::uint64_t>(c));
}

// Edge skeleton between consecutive node groups: every node gets an in-edge
// and an out-edge, plus random extras.
void connect(Rng& rng, const std::vector<NodeId>& a, const std::vector<NodeId>& b, int extra_percent,
             std::vector<std::pair<NodeId, NodeId>>& out) {
  std::set<std::pair<NodeId, NodeId>> made;
  for (NodeId v : b) made.emplace(a[rng.below(a.size())], v);
  for (NodeId u : a) {
    const bool has = std::any_of(made.begin(), made.end(), [&](const auto& e) { return e.first == u; });
    if (!has) made.emplace(u, b[rng.below(b.size())]);
  }
  for (NodeId u : a) {
    for (NodeId v : b) {
      if (!made.count({u, v}) && rng.chance(static_cast<std::uint64_t>(extra_percent), 100)) made.emplace(u, v);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> list(made.begin(), made.end());
  rng.shuffle(list);
  out.insert(out.end(), list.begin(), list.end());
}

}  // namespace

Permutation random_permutation(Rng& rng, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  rng.shuffle(order);
  return Permutation(std::move(order));
}

Abp random_smabp(Rng& rng, const SmAbpParams& params, const PrimeField& field) {
  if (params.layers < 1) throw ValidationError("need at least one layer transition");
  const std::vector<int> widths = layer_widths(rng, params.layers - 1, params.max_width, params.max_nodes - 2);
  std::vector<std::vector<NodeId>> layers{{0}};
  NodeId next = 1;
  for (int w : widths) {
    layers.emplace_back();
    for (int k = 0; k < w; ++k) layers.back().push_back(next++);
  }
  layers.push_back({next++});

  std::vector<Monomial> seen(next, 0);  // X_{s,a}
  std::vector<Edge> edges;
  for (std::size_t li = 0; li + 1 < layers.size(); ++li) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    connect(rng, layers[li], layers[li + 1], params.extra_edge_percent, pairs);
    for (const auto& [u, v] : pairs) {
      const Monomial free = all_vars(params.nvars) & ~seen[u];
      Label label = Label::Const(small_const(rng, field));
      if (free && !rng.chance(static_cast<std::uint64_t>(params.const_percent), 100)) {
        const std::vector<int> choices = vars_of(free);
        label = Label::Var(choices[rng.below(choices.size())]);
      }
      seen[v] |= seen[u] | label.vars();
      edges.push_back(Edge{u, v, label});
    }
  }
  return Abp(params.nvars, field, std::move(layers), std::move(edges));
}

OrderedInstance random_l_ordered(Rng& rng, const OrderedParams& params, const PrimeField& field) {
  const int n = params.nvars, L = params.num_orders;
  if (L < 1) throw ValidationError("need at least one order");
  std::uint64_t perms = 1;
  for (int k = 2; k <= n && perms < 1000; ++k) perms *= static_cast<std::uint64_t>(k);
  if (static_cast<std::uint64_t>(L) > perms) throw ValidationError("more orders requested than permutations exist");
  OrderList orders;
  while (static_cast<int>(orders.size()) < L) {
    Permutation pi = random_permutation(rng, n);
    if (std::find(orders.begin(), orders.end(), pi) == orders.end()) orders.push_back(std::move(pi));
  }

  const int inner = params.layers - 1;
  const int per_block = std::max(inner, (params.max_nodes - 2) / L);
  std::vector<std::vector<NodeId>> layers(static_cast<std::size_t>(params.layers) + 1);
  layers[0] = {0};
  NodeId next = 1;
  std::vector<std::vector<std::vector<NodeId>>> blocks;
  for (int b = 0; b < L; ++b) {
    const std::vector<int> widths = layer_widths(rng, inner, params.max_width, per_block);
    blocks.emplace_back();
    for (int li = 0; li < inner; ++li) {
      blocks.back().emplace_back();
      for (int k = 0; k < widths[static_cast<std::size_t>(li)]; ++k) {
        blocks.back().back().push_back(next);
        layers[static_cast<std::size_t>(li) + 1].push_back(next++);
      }
    }
  }
  const NodeId sink = next++;
  layers.back() = {sink};

  std::vector<int> max_pos(next, 0);
  std::vector<Edge> edges;
  for (int b = 0; b < L; ++b) {
    const Permutation& pi = orders[static_cast<std::size_t>(b)];
    std::vector<std::vector<NodeId>> chain{{0}};
    for (const auto& layer : blocks[static_cast<std::size_t>(b)]) chain.push_back(layer);
    chain.push_back({sink});
    for (std::size_t li = 0; li + 1 < chain.size(); ++li) {
      std::vector<std::pair<NodeId, NodeId>> pairs;
      connect(rng, chain[li], chain[li + 1], 35, pairs);
      for (const auto& [u, v] : pairs) {
        // The source and sink are shared; positions only matter inside the block.
        const int from = u == 0 ? 0 : max_pos[u];
        Label label = Label::Const(small_const(rng, field));
        if (from < n && !rng.chance(static_cast<std::uint64_t>(params.const_percent), 100)) {
          const int pos = from + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(3, n - from))));
          label = Label::Var(pi.at(pos));
          if (v != sink) max_pos[v] = std::max(max_pos[v], pos);
        } else if (v != sink) {
          max_pos[v] = std::max(max_pos[v], from);
        }
        edges.push_back(Edge{u, v, label});
      }
    }
  }
  return OrderedInstance{Abp(n, field, std::move(layers), std::move(edges)), std::move(orders)};
}

CircularInstance random_rotated_roabp(Rng& rng, const CircularParams& params, const PrimeField& field) {
  const int n = params.nvars;
  if (n < 1) throw ValidationError("need at least one variable");
  Permutation pi = random_permutation(rng, n);
  const int rotation = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<std::vector<NodeId>> layers{{0}};
  NodeId next = 1;
  for (int li = 1; li < n; ++li) {
    layers.emplace_back();
    const int w = rng.between(1, params.max_width);
    for (int k = 0; k < w; ++k) layers.back().push_back(next++);
  }
  layers.push_back({next++});
  std::vector<Edge> edges;
  for (int li = 0; li < n; ++li) {
    const int var = pi.at((rotation + li) % n + 1);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    connect(rng, layers[static_cast<std::size_t>(li)], layers[static_cast<std::size_t>(li) + 1],
            params.extra_edge_percent, pairs);
    for (const auto& [u, v] : pairs) {
      const bool is_const = rng.chance(static_cast<std::uint64_t>(params.const_percent), 100);
      edges.push_back(Edge{u, v, is_const ? Label::Const(small_const(rng, field)) : Label::Var(var)});
    }
  }
  return CircularInstance{Abp(n, field, std::move(layers), std::move(edges)), std::move(pi), rotation};
}

MultilinearPoly random_poly(Rng& rng, int nvars, Monomial support, int terms, int max_coeff, const PrimeField& field) {
  const std::vector<int> vars = vars_of(support & all_vars(nvars));
  std::vector<Term> out;
  for (int k = 0; k < terms; ++k) {
    Monomial m = 0;
    for (int v : vars) {
      if (rng.chance(1, 2)) m |= var_bit(v);
    }
    std::int64_t c = rng.between(1, max_coeff);
    if (rng.chance(1, 2)) c = -c;
    out.push_back(Term{m, field.from_i64(c)});
  }
  return MultilinearPoly::from_terms(nvars, field, std::move(out));
}

}  // namespace abpkit
