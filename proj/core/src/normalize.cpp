#include <algorithm>
#include <deque>
#include <numeric>

#include "abpkit/abp.hpp"

namespace abpkit {

namespace {

// Unlayered working copy used while rewriting.
struct Graph {
  std::size_t nodes = 0;
  std::vector<Edge> edges;

  NodeId add_node() { return static_cast<NodeId>(nodes++); }

  std::vector<std::vector<std::size_t>> out_lists() const {
    std::vector<std::vector<std::size_t>> out(nodes);
    for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
    return out;
  }
  std::vector<std::vector<std::size_t>> in_lists() const {
    std::vector<std::vector<std::size_t>> in(nodes);
    for (std::size_t i = 0; i < edges.size(); ++i) in[edges[i].to].push_back(i);
    return in;
  }
};

// Re-roots the given edges so that `root` has out-degree <= 2, using Const(1) edges.
void split_fan_out(Graph& g, NodeId root, std::span<const std::size_t> list, Fe one) {
  if (list.size() <= 2) {
    for (std::size_t e : list) g.edges[e].from = root;
    return;
  }
  const std::size_t half = list.size() / 2;
  for (auto part : {list.first(half), list.subspan(half)}) {
    if (part.size() == 1) {
      g.edges[part[0]].from = root;
      continue;
    }
    const NodeId c = g.add_node();
    g.edges.push_back(Edge{root, c, Label::Const(one)});
    split_fan_out(g, c, part, one);
  }
}

void split_fan_in(Graph& g, NodeId root, std::span<const std::size_t> list, Fe one) {
  if (list.size() <= 2) {
    for (std::size_t e : list) g.edges[e].to = root;
    return;
  }
  const std::size_t half = list.size() / 2;
  for (auto part : {list.first(half), list.subspan(half)}) {
    if (part.size() == 1) {
      g.edges[part[0]].to = root;
      continue;
    }
    const NodeId c = g.add_node();
    g.edges.push_back(Edge{c, root, Label::Const(one)});
    split_fan_in(g, c, part, one);
  }
}

std::vector<char> reach(const Graph& g, NodeId start, bool forward) {
  const auto adj = forward ? g.out_lists() : g.in_lists();
  std::vector<char> seen(g.nodes, 0);
  std::deque<NodeId> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (std::size_t e : adj[u]) {
      NodeId w = forward ? g.edges[e].to : g.edges[e].from;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Abp normalize(const Abp& p) {
  const PrimeField& F = p.field();
  Graph g;
  g.nodes = p.num_nodes();
  for (const Edge& e : p.edges()) {
    if (!e.label.is_var() && e.label.value.v == 0) continue;
    g.edges.push_back(e);
  }
  const NodeId s = p.source(), t = p.sink();
  const auto from_s = reach(g, s, true);
  const auto to_t = reach(g, t, false);
  if (!from_s[t]) {
    return Abp(p.nvars(), F, {{0}, {1}}, {});
  }
  std::erase_if(g.edges, [&](const Edge& e) {
    return !(from_s[e.from] && to_t[e.from] && from_s[e.to] && to_t[e.to]);
  });

  // Compact ids: live nodes keep their relative order.
  std::vector<NodeId> rename(g.nodes, 0);
  std::vector<NodeId> live;
  for (const auto& layer : p.layers()) {
    for (NodeId u : layer) {
      if (from_s[u] && to_t[u]) live.push_back(u);
    }
  }
  std::sort(live.begin(), live.end());
  for (std::size_t i = 0; i < live.size(); ++i) rename[live[i]] = static_cast<NodeId>(i);
  for (Edge& e : g.edges) {
    e.from = rename[e.from];
    e.to = rename[e.to];
  }
  g.nodes = live.size();

  const std::size_t original_nodes = g.nodes;
  {
    const auto out = g.out_lists();
    for (NodeId u = 0; u < original_nodes; ++u) {
      if (out[u].size() > 2) split_fan_out(g, u, out[u], F.one());
    }
  }
  {
    const auto in = g.in_lists();
    const std::size_t count = g.nodes;
    for (NodeId u = 0; u < count; ++u) {
      if (in[u].size() > 2) split_fan_in(g, u, in[u], F.one());
    }
  }

  // Longest-path layering (Kahn order).
  const auto out = g.out_lists();
  std::vector<int> indeg(g.nodes, 0), level(g.nodes, 0);
  for (const Edge& e : g.edges) ++indeg[e.to];
  std::deque<NodeId> queue;
  for (NodeId u = 0; u < g.nodes; ++u) {
    if (indeg[u] == 0) queue.push_back(u);
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (std::size_t e : out[u]) {
      NodeId w = g.edges[e].to;
      level[w] = std::max(level[w], level[u] + 1);
      if (--indeg[w] == 0) queue.push_back(w);
    }
  }

  // Subdivide edges that skip layers; the label rides on the first hop.
  const std::size_t edge_count = g.edges.size();
  for (std::size_t i = 0; i < edge_count; ++i) {
    const int gap = level[g.edges[i].to] - level[g.edges[i].from];
    if (gap <= 1) continue;
    const NodeId head = g.edges[i].to;
    NodeId prev = g.add_node();
    level.push_back(level[g.edges[i].from] + 1);
    g.edges[i].to = prev;
    for (int k = 2; k < gap; ++k) {
      const NodeId next = g.add_node();
      level.push_back(level[prev] + 1);
      g.edges.push_back(Edge{prev, next, Label::Const(F.one())});
      prev = next;
    }
    g.edges.push_back(Edge{prev, head, Label::Const(F.one())});
  }

  const int depth = *std::max_element(level.begin(), level.end());
  std::vector<std::vector<NodeId>> layers(static_cast<std::size_t>(depth) + 1);
  std::vector<NodeId> order(g.nodes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return level[a] < level[b]; });
  std::vector<NodeId> final_id(g.nodes);
  for (std::size_t i = 0; i < order.size(); ++i) {
    final_id[order[i]] = static_cast<NodeId>(i);
    layers[static_cast<std::size_t>(level[order[i]])].push_back(static_cast<NodeId>(i));
  }
  for (Edge& e : g.edges) {
    e.from = final_id[e.from];
    e.to = final_id[e.to];
  }
  return Abp(p.nvars(), F, std::move(layers), std::move(g.edges));
}

bool is_normalized(const Abp& p) {
  const SegmentView whole = view_segment(p, Segment{p.source(), p.sink(), {}});
  for (NodeId u = 0; u < p.num_nodes(); ++u) {
    if (!whole.node_in[u]) return false;
    if (p.out_edges(u).size() > 2 || p.in_edges(u).size() > 2) return false;
  }
  return true;
}

}  // namespace abpkit
