#include "abpkit/ordered.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "abpkit/errors.hpp"

namespace abpkit {

namespace {

// Routing state of one node copy.
struct CopyState {
  NodeId orig = 0;
  int band = 0;
  std::vector<char> consistent;  // every path into the copy is consistent with order m
  std::vector<int> max_pos;      // largest position read so far under order m
  int level = 0;                 // max_pos[band]
  int sub = 0;                   // longest constant chain inside the same level
};

struct CopyEdge {
  int from;
  int to;  // -1 for the new sink
  Label label;
};

std::string describe_path(const Abp& p, const Path& path) {
  std::string s;
  for (EdgeIndex e : path) {
    const Label& l = p.edge(e).label;
    if (!l.is_var()) continue;
    if (!s.empty()) s += ' ';
    s += "x" + std::to_string(l.var);
  }
  return s.empty() ? "(no variables)" : s;
}

std::vector<MultilinearPoly> prefix_polys(const Abp& p) {
  std::vector<MultilinearPoly> val(p.num_nodes(), MultilinearPoly(p.nvars(), p.field()));
  val[p.source()] = MultilinearPoly::constant(p.nvars(), p.field(), p.field().one());
  for (const auto& layer : p.layers()) {
    for (NodeId u : layer) {
      if (val[u].is_zero()) continue;
      for (EdgeIndex e : p.out_edges(u)) {
        const Edge& edge = p.edges()[e];
        const MultilinearPoly step =
            edge.label.is_var() ? poly_mul_var(val[u], edge.label.var) : poly_scale(val[u], edge.label.value);
        val[edge.to] = poly_add(val[edge.to], step);
      }
    }
  }
  return val;
}

Abp zero_program(const Abp& p) {
  return Abp(p.nvars(), p.field(), {{0}, {1}}, {});
}

}  // namespace

std::size_t PassResult::non_padding_nodes() const {
  return static_cast<std::size_t>(std::count(padding.begin(), padding.end(), 0));
}

PassResult order_to_pass(const Abp& p, const OrderList& orders) {
  if (orders.empty()) throw ValidationError("order list is empty");
  validate_orders(orders, p.nvars());
  const OrderCheck oc = check_ordered(p, orders);
  if (!oc.ok) throw OrderViolation("path consistent with no order: " + describe_path(p, oc.witness));

  const int L = static_cast<int>(orders.size());
  const int n = p.nvars();
  std::vector<CopyState> copies;
  std::vector<std::vector<int>> copy_of(p.num_nodes(), std::vector<int>(static_cast<std::size_t>(L), -1));
  std::vector<CopyEdge> edges;

  copies.push_back(CopyState{p.source(), 0, std::vector<char>(static_cast<std::size_t>(L), 1),
                             std::vector<int>(static_cast<std::size_t>(L), 0), 0, 0});
  copy_of[p.source()][0] = 0;

  auto merge_into = [&](NodeId v, int band, const std::vector<char>& ok, const std::vector<int>& pos) {
    int& id = copy_of[v][static_cast<std::size_t>(band)];
    if (id < 0) {
      id = static_cast<int>(copies.size());
      copies.push_back(CopyState{v, band, ok, pos, 0, 0});
      return id;
    }
    CopyState& c = copies[static_cast<std::size_t>(id)];
    for (int m = 0; m < L; ++m) {
      c.consistent[static_cast<std::size_t>(m)] &= ok[static_cast<std::size_t>(m)];
      c.max_pos[static_cast<std::size_t>(m)] = std::max(c.max_pos[static_cast<std::size_t>(m)], pos[static_cast<std::size_t>(m)]);
    }
    return id;
  };

  // Every in-edge of a node comes from an earlier layer, so a copy's state is
  // final by the time its node is processed.
  for (const auto& layer : p.layers()) {
    for (NodeId u : layer) {
      for (int band = 0; band < L; ++band) {
        const int cu = copy_of[u][static_cast<std::size_t>(band)];
        if (cu < 0) continue;
        for (EdgeIndex e : p.out_edges(u)) {
          const Edge& edge = p.edges()[e];
          const CopyState src = copies[static_cast<std::size_t>(cu)];
          std::vector<char> ok = src.consistent;
          std::vector<int> pos = src.max_pos;
          int target = band;
          if (edge.label.is_var()) {
            const int k = edge.label.var;
            target = -1;
            for (int m = 0; m < L; ++m) {
              const int pk = orders[static_cast<std::size_t>(m)].position_of(k);
              if (ok[static_cast<std::size_t>(m)] && pk > pos[static_cast<std::size_t>(m)]) {
                pos[static_cast<std::size_t>(m)] = pk;
                if (target < 0 && m >= band) target = m;
              } else {
                ok[static_cast<std::size_t>(m)] = 0;
              }
            }
            if (target < 0) {
              throw InternalContradiction("routing conflict: no band >= " + std::to_string(band + 1) +
                                          " admits x" + std::to_string(k) + " after node " + std::to_string(u));
            }
          }
          const int cv = merge_into(edge.to, target, ok, pos);
          edges.push_back(CopyEdge{cu, cv, edge.label});
        }
      }
    }
  }
  for (int band = 0; band < L; ++band) {
    const int ct = copy_of[p.sink()][static_cast<std::size_t>(band)];
    if (ct >= 0) edges.push_back(CopyEdge{ct, -1, Label::Const(p.field().one())});
  }

  PassResult result{zero_program(p), {}, {}, {}, copies.size()};
  result.copies.assign(p.num_nodes(), std::vector<std::optional<NodeId>>(static_cast<std::size_t>(L)));

  // Keep only copies that reach the new sink.
  std::vector<char> live(copies.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const CopyEdge& e : edges) {
      if (!live[static_cast<std::size_t>(e.from)] && (e.to < 0 || live[static_cast<std::size_t>(e.to)])) {
        live[static_cast<std::size_t>(e.from)] = 1;
        changed = true;
      }
    }
  }
  if (!live[0]) {
    result.copies[p.source()][0] = 0;
    result.padding = {0, 1};
    result.band_first_layer.assign(static_cast<std::size_t>(L), 1);
    result.band_first_layer[0] = 0;
    return result;
  }
  std::vector<CopyEdge> kept;
  for (const CopyEdge& e : edges) {
    if (live[static_cast<std::size_t>(e.from)] && (e.to < 0 || live[static_cast<std::size_t>(e.to)])) kept.push_back(e);
  }

  // Levels, then constant-chain depth within a level. Copies were created in
  // topological order, and so were the edges.
  for (CopyState& c : copies) c.level = c.max_pos[static_cast<std::size_t>(c.band)];
  for (const CopyEdge& e : kept) {
    if (e.to < 0 || e.label.is_var()) continue;
    const CopyState& a = copies[static_cast<std::size_t>(e.from)];
    CopyState& b = copies[static_cast<std::size_t>(e.to)];
    if (a.band == b.band && a.level == b.level) b.sub = std::max(b.sub, a.sub + 1);
  }

  using Time = std::tuple<int, int, int>;
  auto time_of = [&](int c) {
    const CopyState& s = copies[static_cast<std::size_t>(c)];
    return Time{s.band, s.level, s.sub};
  };
  auto landing = [&](int band, int var) {
    return Time{band, orders[static_cast<std::size_t>(band)].position_of(var), 0};
  };
  const Time end{L, 0, 0};
  std::map<Time, int> index;
  for (std::size_t c = 0; c < copies.size(); ++c) {
    if (live[c]) index.emplace(time_of(static_cast<int>(c)), 0);
  }
  for (const CopyEdge& e : kept) {
    if (e.label.is_var()) index.emplace(landing(copies[static_cast<std::size_t>(e.to)].band, e.label.var), 0);
  }
  index.emplace(end, 0);
  int next = 0;
  for (auto& [t, i] : index) i = next++;

  // Q node ids: live copies, the new sink, then padding in creation order.
  std::vector<int> layer_of_node;
  std::vector<char> padding;
  std::vector<NodeId> qid(copies.size(), 0);
  for (std::size_t c = 0; c < copies.size(); ++c) {
    if (!live[c]) continue;
    qid[c] = static_cast<NodeId>(layer_of_node.size());
    layer_of_node.push_back(index.at(time_of(static_cast<int>(c))));
    padding.push_back(0);
    result.copies[copies[c].orig][static_cast<std::size_t>(copies[c].band)] = qid[c];
  }
  const auto sink = static_cast<NodeId>(layer_of_node.size());
  layer_of_node.push_back(index.at(end));
  padding.push_back(1);

  std::vector<Edge> qedges;
  const Label one = Label::Const(p.field().one());
  for (const CopyEdge& e : kept) {
    const NodeId from = qid[static_cast<std::size_t>(e.from)];
    const NodeId to = e.to < 0 ? sink : qid[static_cast<std::size_t>(e.to)];
    const int a = layer_of_node[from];
    const int b = layer_of_node[to];
    const int hop = e.label.is_var() ? index.at(landing(copies[static_cast<std::size_t>(e.to)].band, e.label.var)) : a + 1;
    if (!(a < hop && hop <= b)) throw InternalContradiction("order-to-pass layering out of order");
    NodeId prev = from;
    for (int t = a + 1; t <= b; ++t) {
      NodeId cur = to;
      if (t < b) {
        cur = static_cast<NodeId>(layer_of_node.size());
        layer_of_node.push_back(t);
        padding.push_back(1);
      }
      qedges.push_back(Edge{prev, cur, t == hop ? e.label : one});
      prev = cur;
    }
  }

  std::vector<std::vector<NodeId>> layers(static_cast<std::size_t>(next));
  for (NodeId v = 0; v < layer_of_node.size(); ++v) layers[static_cast<std::size_t>(layer_of_node[v])].push_back(v);
  result.q = Abp(n, p.field(), std::move(layers), std::move(qedges));
  result.padding = std::move(padding);
  result.band_first_layer.clear();
  for (int band = 0; band < L; ++band) {
    result.band_first_layer.push_back(index.lower_bound(Time{band, 0, 0})->second);
  }
  return result;
}

bool verify_band_claim(const Abp& p, const PassResult& r, NodeId* failed) {
  const std::vector<MultilinearPoly> in_p = prefix_polys(p);
  const std::vector<MultilinearPoly> in_q = prefix_polys(r.q);
  for (NodeId u = 0; u < p.num_nodes(); ++u) {
    MultilinearPoly sum(p.nvars(), p.field());
    for (const auto& c : r.copies.at(u)) {
      if (c) sum = poly_add(sum, in_q.at(*c));
    }
    if (!poly_equal_exact(sum, in_p[u])) {
      if (failed) *failed = u;
      return false;
    }
  }
  return true;
}

bool check_band_purity(const PassResult& r, const OrderList& orders) {
  const Abp& q = r.q;
  const int L = static_cast<int>(r.band_first_layer.size());
  if (L != static_cast<int>(orders.size())) return false;
  std::vector<int> band_of_layer(static_cast<std::size_t>(q.num_layers()), L - 1);
  for (int b = 0; b < L; ++b) {
    const int end = b + 1 < L ? r.band_first_layer[static_cast<std::size_t>(b + 1)] : q.num_layers();
    for (int l = r.band_first_layer[static_cast<std::size_t>(b)]; l < end; ++l) band_of_layer[static_cast<std::size_t>(l)] = b;
  }
  // Variable read at each layer transition, by head layer.
  std::vector<int> var_at(static_cast<std::size_t>(q.num_layers()), 0);
  for (const Edge& e : q.edges()) {
    if (!e.label.is_var()) continue;
    int& v = var_at[static_cast<std::size_t>(q.layer_of(e.to))];
    if (v != 0 && v != e.label.var) return false;
    v = e.label.var;
  }
  std::vector<int> last_pos(static_cast<std::size_t>(L), 0);
  for (int l = 0; l < q.num_layers(); ++l) {
    const int v = var_at[static_cast<std::size_t>(l)];
    if (v == 0) continue;
    const int b = band_of_layer[static_cast<std::size_t>(l)];
    const int pos = orders[static_cast<std::size_t>(b)].position_of(v);
    if (pos <= last_pos[static_cast<std::size_t>(b)]) return false;
    last_pos[static_cast<std::size_t>(b)] = pos;
  }
  return true;
}

LeafOrderInfo leaf_order_info(const Formula& f, std::uint32_t gate) {
  const Gate& g = f.gate(gate);
  LeafOrderInfo info;
  if (g.kind != Gate::Kind::Leaf) return info;
  const Abp& p = f.abp();
  std::vector<Monomial> before(static_cast<std::size_t>(p.nvars()) + 1, 0);  // before[y]: read before y on some path
  Monomial earlier = 0;  // variables of preceding chained segments
  for (const Segment& seg : g.segments) {
    const SegmentView view = view_segment(p, seg);
    for (EdgeIndex e = 0; e < p.edges().size(); ++e) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      if (edge.label.is_var()) before[static_cast<std::size_t>(edge.label.var)] |= view.vars_from[edge.from] | earlier;
    }
    earlier |= view.vars();
  }
  info.vars = earlier;
  for (int y = 1; y <= p.nvars(); ++y) {
    for (Monomial xs = before[static_cast<std::size_t>(y)]; xs; xs &= xs - 1) {
      const int x = __builtin_ctzll(xs) + 1;
      if (before[static_cast<std::size_t>(x)] & var_bit(y)) info.symmetric_pair = true;
    }
  }
  // Transitive closure of "read before"; a cycle puts some variable before itself.
  std::vector<Monomial> closure = before;
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 1; y <= p.nvars(); ++y) {
      Monomial acc = closure[static_cast<std::size_t>(y)];
      for (Monomial xs = closure[static_cast<std::size_t>(y)]; xs; xs &= xs - 1) {
        acc |= closure[static_cast<std::size_t>(__builtin_ctzll(xs) + 1)];
      }
      if (acc != closure[static_cast<std::size_t>(y)]) {
        closure[static_cast<std::size_t>(y)] = acc;
        changed = true;
      }
    }
  }
  for (int y = 1; y <= p.nvars(); ++y) {
    if (closure[static_cast<std::size_t>(y)] & var_bit(y)) info.cyclic = true;
  }
  return info;
}

RoabpCensus roabp_leaf_census(const Formula& f, int num_orders) {
  if (num_orders < 1) throw ValidationError("census needs at least one order");
  std::map<std::uint32_t, LeafOrderInfo> cache;
  auto info = [&](std::uint32_t g) -> const LeafOrderInfo& {
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, leaf_order_info(f, g)).first;
    return it->second;
  };
  RoabpCensus c;
  c.non_roabp_leaves = max_over_parse_trees(f, [&](std::uint32_t g) -> std::int64_t { return info(g).symmetric_pair; });
  c.cyclic_leaves = max_over_parse_trees(f, [&](std::uint32_t g) -> std::int64_t { return info(g).cyclic; });
  while ((2 << c.bound) <= num_orders) ++c.bound;
  c.parse_trees = count_parse_trees(f);
  return c;
}

RoabpCensus roabp_leaf_census(const Abp& p, const OrderList& orders, const FormulaOptions& options) {
  return roabp_leaf_census(abp_to_formula(p, options), static_cast<int>(orders.size()));
}

}  // namespace abpkit
