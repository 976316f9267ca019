#include "abpkit/abp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "abpkit/errors.hpp"
#include "abpkit/paths.hpp"

namespace abpkit {

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& edges, bool outgoing,
               std::vector<std::uint32_t>& offsets, std::vector<EdgeIndex>& list) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(outgoing ? e.from : e.to) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  list.assign(edges.size(), 0);
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (EdgeIndex i = 0; i < edges.size(); ++i) {
    NodeId key = outgoing ? edges[i].from : edges[i].to;
    list[fill[key]++] = i;
  }
}

}  // namespace

Abp::Abp(int nvars, PrimeField field, std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges)
    : nvars_(nvars), field_(field), layers_(std::move(layers)), edges_(std::move(edges)) {
  if (nvars_ < 0 || nvars_ > kMaxVars) throw ValidationError("nvars must lie in [0, 64]");
  if (layers_.size() < 2) throw ValidationError("an ABP needs at least two layers");
  if (layers_.front().size() != 1) throw ValidationError("layer 0 must hold exactly the source");
  if (layers_.back().size() != 1) throw ValidationError("the last layer must hold exactly the sink");
  std::size_t total = 0;
  for (const auto& layer : layers_) total += layer.size();
  layer_of_.assign(total, -1);
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    for (NodeId u : layers_[li]) {
      if (u >= total) {
        throw ValidationError("node id " + std::to_string(u) + " is not in 0.." + std::to_string(total - 1));
      }
      if (layer_of_[u] != -1) throw ValidationError("node id " + std::to_string(u) + " appears twice");
      layer_of_[u] = static_cast<int>(li);
    }
  }
  for (const Edge& e : edges_) {
    if (e.from >= total || e.to >= total) throw ValidationError("edge endpoint is not a node");
    if (layer_of_[e.to] != layer_of_[e.from] + 1) {
      throw ValidationError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            " does not join consecutive layers");
    }
    if (e.label.is_var() && (e.label.var < 1 || e.label.var > nvars_)) {
      throw ValidationError("edge label x" + std::to_string(e.label.var) + " outside nvars");
    }
    if (!e.label.is_var() && e.label.value.v >= field_.prime()) {
      throw ValidationError("edge constant not reduced modulo p");
    }
  }
  build_csr(total, edges_, true, out_offsets_, out_list_);
  build_csr(total, edges_, false, in_offsets_, in_list_);
}

const Edge& Abp::edge(EdgeIndex e) const {
  if (e >= edges_.size()) throw LookupError("unknown edge index " + std::to_string(e));
  return edges_[e];
}

int Abp::layer_of(NodeId u) const {
  if (!has_node(u)) throw LookupError("unknown node id " + std::to_string(u));
  return layer_of_[u];
}

std::span<const EdgeIndex> Abp::out_edges(NodeId u) const {
  if (!has_node(u)) throw LookupError("unknown node id " + std::to_string(u));
  return {out_list_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const EdgeIndex> Abp::in_edges(NodeId u) const {
  if (!has_node(u)) throw LookupError("unknown node id " + std::to_string(u));
  return {in_list_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

SegmentView view_segment(const Abp& p, const Segment& seg) {
  SegmentView view;
  view.seg = seg;
  const std::size_t n = p.num_nodes();
  const int from_layer = p.layer_of(seg.from);
  p.layer_of(seg.to);
  view.node_in.assign(n, 0);
  view.edge_in.assign(p.edges().size(), 0);
  view.vars_from.assign(n, 0);
  view.vars_to.assign(n, 0);

  NodeId end = seg.to;
  if (seg.last_edge) {
    const Edge& last = p.edge(*seg.last_edge);
    if (last.to != seg.to) throw ValidationError("segment last edge does not end at the segment sink");
    end = last.from;
  }
  const int end_layer = p.layer_of(end);
  if (end_layer < from_layer) return view;

  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::deque<NodeId> queue{seg.from};
  fwd[seg.from] = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (p.layer_of(u) >= end_layer) continue;
    for (EdgeIndex e : p.out_edges(u)) {
      NodeId w = p.edges()[e].to;
      if (!fwd[w]) {
        fwd[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (!fwd[end]) return view;
  queue.push_back(end);
  bwd[end] = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (p.layer_of(u) <= from_layer) continue;
    for (EdgeIndex e : p.in_edges(u)) {
      NodeId w = p.edges()[e].from;
      if (!bwd[w]) {
        bwd[w] = 1;
        queue.push_back(w);
      }
    }
  }
  for (int li = from_layer; li <= end_layer; ++li) {
    for (NodeId u : p.layers()[static_cast<std::size_t>(li)]) {
      if (fwd[u] && bwd[u]) {
        view.node_in[u] = 1;
        view.topo.push_back(u);
      }
    }
  }
  for (NodeId u : view.topo) {
    for (EdgeIndex e : p.out_edges(u)) {
      if (view.node_in[p.edges()[e].to]) view.edge_in[e] = 1;
    }
  }
  if (seg.last_edge) {
    view.node_in[seg.to] = 1;
    view.edge_in[*seg.last_edge] = 1;
    view.topo.push_back(seg.to);
  }
  for (NodeId u : view.topo) {
    for (EdgeIndex e : p.in_edges(u)) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      view.vars_from[u] |= view.vars_from[edge.from] | edge.label.vars();
    }
  }
  for (auto it = view.topo.rbegin(); it != view.topo.rend(); ++it) {
    for (EdgeIndex e : p.out_edges(*it)) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      view.vars_to[*it] |= view.vars_to[edge.to] | edge.label.vars();
    }
  }
  return view;
}

Monomial segment_vars(const Abp& p, const Segment& seg) { return view_segment(p, seg).vars(); }

Monomial subprogram_vars(const Abp& p, NodeId u, NodeId v) { return segment_vars(p, Segment{u, v, {}}); }

MultilinearPoly segment_poly(const Abp& p, const Segment& seg) {
  const SegmentView view = view_segment(p, seg);
  if (view.empty()) return MultilinearPoly(p.nvars(), p.field());
  std::vector<std::optional<MultilinearPoly>> at(p.num_nodes());
  at[seg.from] = MultilinearPoly::constant(p.nvars(), p.field(), p.field().one());
  for (NodeId u : view.topo) {
    if (u == seg.from) continue;
    MultilinearPoly acc(p.nvars(), p.field());
    for (EdgeIndex e : p.in_edges(u)) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      const MultilinearPoly& prev = *at[edge.from];
      acc = poly_add(acc, edge.label.is_var() ? poly_mul_var(prev, edge.label.var)
                                              : poly_scale(prev, edge.label.value));
    }
    at[u] = std::move(acc);
  }
  return std::move(*at[seg.to]);
}

Fe segment_eval(const Abp& p, const Segment& seg, std::span<const Fe> point) {
  if (point.size() != static_cast<std::size_t>(p.nvars())) throw DimensionError("point length differs from nvars");
  const SegmentView view = view_segment(p, seg);
  const PrimeField& F = p.field();
  if (view.empty()) return F.zero();
  std::vector<Fe> at(p.num_nodes(), F.zero());
  at[seg.from] = F.one();
  for (NodeId u : view.topo) {
    if (u == seg.from) continue;
    for (EdgeIndex e : p.in_edges(u)) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      const Fe w = edge.label.is_var() ? point[static_cast<std::size_t>(edge.label.var - 1)] : edge.label.value;
      at[u] = F.add(at[u], F.mul(at[edge.from], w));
    }
  }
  return at[seg.to];
}

Fe abp_eval(const Abp& p, std::span<const Fe> point) {
  return segment_eval(p, Segment{p.source(), p.sink(), {}}, point);
}

MultilinearPoly subprogram_poly(const Abp& p, NodeId u, NodeId v) { return segment_poly(p, Segment{u, v, {}}); }

MultilinearPoly abp_poly(const Abp& p) { return subprogram_poly(p, p.source(), p.sink()); }

SmCheck is_syntactic_multilinear(const Abp& p) {
  const SegmentView whole = view_segment(p, Segment{p.source(), p.sink(), {}});
  for (NodeId a : whole.topo) {
    for (EdgeIndex e : p.out_edges(a)) {
      if (!whole.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      if (!edge.label.is_var() || !(whole.vars_to[edge.to] & var_bit(edge.label.var))) continue;
      // Witness: s ~> a, e, then b ~> (another x_k edge) ~> t.
      SmCheck out{false, {}};
      out.witness = *find_path(p, p.source(), a);
      out.witness.push_back(e);
      for (NodeId c : whole.topo) {
        if (p.layer_of(c) < p.layer_of(edge.to)) continue;
        for (EdgeIndex f : p.out_edges(c)) {
          const Edge& other = p.edges()[f];
          if (!whole.edge_in[f] || !(other.label == edge.label)) continue;
          auto mid = find_path(p, edge.to, c);
          if (!mid) continue;
          out.witness.insert(out.witness.end(), mid->begin(), mid->end());
          out.witness.push_back(f);
          auto tail = find_path(p, other.to, p.sink());
          out.witness.insert(out.witness.end(), tail->begin(), tail->end());
          return out;
        }
      }
      throw InternalContradiction("repeated variable detected but no witness path found");
    }
  }
  return {};
}

Classification classify(const Abp& p) {
  Classification out;
  const int edge_layers = p.num_layers() - 1;
  std::vector<int> layer_var(static_cast<std::size_t>(edge_layers), 0);
  out.oblivious = true;
  for (const Edge& e : p.edges()) {
    if (!e.label.is_var()) continue;
    int& slot = layer_var[static_cast<std::size_t>(p.layer_of(e.from))];
    if (slot == 0) {
      slot = e.label.var;
    } else if (slot != e.label.var) {
      out.oblivious = false;
    }
  }
  if (!out.oblivious) return out;

  std::vector<int> layers_per_var(static_cast<std::size_t>(p.nvars()) + 1, 0);
  for (int v : layer_var) {
    if (v != 0) ++layers_per_var[static_cast<std::size_t>(v)];
  }
  out.roabp = std::all_of(layers_per_var.begin(), layers_per_var.end(), [](int c) { return c <= 1; });

  // Greedy: extend the current read-once segment until a layer re-reads a variable.
  LPass pass;
  pass.count = 1;
  pass.cut_layers.push_back(0);
  Monomial seen = 0;
  for (int li = 0; li < edge_layers; ++li) {
    const int v = layer_var[static_cast<std::size_t>(li)];
    if (v == 0) continue;
    if (seen & var_bit(v)) {
      ++pass.count;
      pass.cut_layers.push_back(li);
      seen = 0;
    }
    seen |= var_bit(v);
  }
  out.l_pass = std::move(pass);
  return out;
}

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)), pos_(order_.size(), 0) {
  const int n = static_cast<int>(order_.size());
  for (int k = 0; k < n; ++k) {
    const int v = order_[static_cast<std::size_t>(k)];
    if (v < 1 || v > n || pos_[static_cast<std::size_t>(v - 1)] != 0) {
      throw ValidationError("permutation is not a bijection on {1.." + std::to_string(n) + "}");
    }
    pos_[static_cast<std::size_t>(v - 1)] = k + 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(order));
}

void validate_orders(const OrderList& orders, int nvars) {
  if (orders.empty()) throw ValidationError("order list is empty");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i].size() != nvars) {
      throw ValidationError("order " + std::to_string(i + 1) + " is not a permutation of {1.." +
                            std::to_string(nvars) + "}");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (orders[i] == orders[j]) throw ValidationError("order list repeats a permutation");
    }
  }
}

bool path_consistent(const Abp& p, std::span<const EdgeIndex> path, const Permutation& pi) {
  int last = 0;
  for (EdgeIndex e : path) {
    const Label& l = p.edge(e).label;
    if (!l.is_var()) continue;
    const int pos = pi.position_of(l.var);
    if (pos <= last) return false;
    last = pos;
  }
  return true;
}

OrderCheck check_ordered(const Abp& p, const OrderList& orders, std::uint64_t enumeration_limit) {
  validate_orders(orders, p.nvars());
  if (count_paths(p, Segment{p.source(), p.sink(), {}}) <= enumeration_limit) {
    return check_ordered_by_enumeration(p, orders, enumeration_limit);
  }
  return check_ordered_by_signatures(p, orders);
}

OrderCheck check_ordered_by_enumeration(const Abp& p, const OrderList& orders, std::uint64_t path_cap) {
  validate_orders(orders, p.nvars());
  OrderCheck out;
  for_each_path(p, Segment{p.source(), p.sink(), {}}, path_cap, [&](std::span<const EdgeIndex> path) {
    if (!out.ok) return;
    const bool covered = std::any_of(orders.begin(), orders.end(),
                                     [&](const Permutation& pi) { return path_consistent(p, path, pi); });
    if (!covered) {
      out.ok = false;
      out.witness.assign(path.begin(), path.end());
    }
  });
  return out;
}

OrderCheck check_ordered_by_signatures(const Abp& p, const OrderList& orders, std::size_t signature_cap) {
  validate_orders(orders, p.nvars());
  using Signature = std::vector<int>;  // per order: max position so far, or -1 once broken
  struct Origin {
    NodeId node;
    std::size_t index;
    EdgeIndex edge;
  };
  const SegmentView whole = view_segment(p, Segment{p.source(), p.sink(), {}});
  OrderCheck out;
  if (whole.empty()) return out;

  std::vector<std::map<Signature, std::size_t>> index(p.num_nodes());
  std::vector<std::vector<const Signature*>> sigs(p.num_nodes());
  std::vector<std::vector<std::optional<Origin>>> origin(p.num_nodes());
  auto insert = [&](NodeId u, Signature sig, std::optional<Origin> from) {
    auto [it, fresh] = index[u].emplace(std::move(sig), sigs[u].size());
    if (!fresh) return;
    if (sigs[u].size() >= signature_cap) {
      throw BudgetExceeded("order signature DP exceeded cap at node " + std::to_string(u), sigs[u].size());
    }
    sigs[u].push_back(&it->first);
    origin[u].push_back(from);
  };
  auto all_broken = [](const Signature& s) {
    return std::all_of(s.begin(), s.end(), [](int x) { return x < 0; });
  };
  auto prefix_of = [&](NodeId u, std::size_t i) {
    Path rev;
    while (origin[u][i]) {
      const Origin o = *origin[u][i];
      rev.push_back(o.edge);
      u = o.node;
      i = o.index;
    }
    return Path(rev.rbegin(), rev.rend());
  };

  insert(p.source(), Signature(orders.size(), 0), std::nullopt);
  for (NodeId u : whole.topo) {
    for (std::size_t i = 0; i < sigs[u].size(); ++i) {
      if (all_broken(*sigs[u][i])) {
        out.ok = false;
        out.witness = prefix_of(u, i);
        auto tail = find_path(p, u, p.sink());
        out.witness.insert(out.witness.end(), tail->begin(), tail->end());
        return out;
      }
    }
    for (EdgeIndex e : p.out_edges(u)) {
      if (!whole.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      for (std::size_t i = 0; i < sigs[u].size(); ++i) {
        Signature next = *sigs[u][i];
        if (edge.label.is_var()) {
          for (std::size_t m = 0; m < orders.size(); ++m) {
            const int pos = orders[m].position_of(edge.label.var);
            next[m] = (next[m] >= 0 && pos > next[m]) ? pos : -1;
          }
        }
        insert(edge.to, std::move(next), Origin{u, i, e});
      }
    }
  }
  return out;
}

}  // namespace abpkit
