#include "abpkit/decompose.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "abpkit/errors.hpp"

namespace abpkit {

namespace {

Color threshold_color(int x, int n) {
  if (3 * x > 2 * n) return Color::Blue;
  if (3 * x >= n) return Color::Red;
  return Color::Green;
}

Coloring color_view(const Abp& p, const SegmentView& view) {
  Coloring out;
  out.seg = view.seg;
  out.color.assign(p.num_nodes(), Color::Uncolored);
  out.x_from.assign(p.num_nodes(), 0);
  if (view.empty()) return out;
  out.n = degree(view.vars());
  for (NodeId a : view.topo) out.x_from[a] = degree(view.vars_from[a]);

  out.color[view.seg.to] = Color::Blue;
  std::deque<NodeId> blue{view.seg.to};
  while (!blue.empty()) {
    const NodeId b = blue.front();
    blue.pop_front();
    for (EdgeIndex e : p.in_edges(b)) {
      if (!view.edge_in[e]) continue;
      const NodeId a = p.edges()[e].from;
      if (out.color[a] != Color::Uncolored) continue;
      out.color[a] = threshold_color(out.x_from[a], out.n);
      if (out.color[a] == Color::Blue) blue.push_back(a);
    }
  }
  return out;
}

}  // namespace

Coloring color_segment(const Abp& p, const Segment& seg) { return color_view(p, view_segment(p, seg)); }

Coloring color_nodes(const Abp& p, NodeId u, NodeId v) { return color_segment(p, Segment{u, v, {}}); }

CutSet find_cut_edges(const Abp& p, const Segment& seg) {
  const SegmentView view = view_segment(p, seg);
  if (view.vars() == 0) {
    throw DegenerateInputError("subprogram reads no variable; nothing to decompose");
  }
  const Coloring coloring = color_view(p, view);
  CutSet cuts;
  cuts.seg = seg;
  cuts.n = coloring.n;
  for (NodeId a : view.topo) {
    for (EdgeIndex e : p.out_edges(a)) {
      if (!view.edge_in[e]) continue;
      const Edge& edge = p.edges()[e];
      if (coloring.color[edge.to] != Color::Blue) continue;
      const Color tail = coloring.color[a];
      if (tail != Color::Red && tail != Color::Green) continue;
      CutEdge cut{e, tail == Color::Red, coloring.x_from[a], coloring.x_from[edge.to],
                  degree(view.vars_to[edge.to])};
      (cut.red ? cuts.red_blue : cuts.green_blue).push_back(cut);
    }
  }
  return cuts;
}

Decomposition decompose_segment(const Abp& p, const Segment& seg) {
  Decomposition d;
  d.cuts = find_cut_edges(p, seg);
  const SegmentView view = view_segment(p, seg);
  for (EdgeIndex e = 0; e < p.edges().size(); ++e) {
    const Edge& edge = p.edges()[e];
    if (!view.edge_in[e] || !edge.label.is_var()) continue;
    if ((view.vars_from[edge.from] | view.vars_to[edge.to]) & edge.label.vars()) {
      throw MultilinearityError("a path of the subprogram reads x" + std::to_string(edge.label.var) + " twice");
    }
  }
  auto add = [&](const CutEdge& cut) {
    const Edge& edge = p.edges()[cut.edge];
    Summand s{cut.edge, segment_poly(p, Segment{seg.from, edge.from, {}}), edge.label,
              edge.to == seg.to ? MultilinearPoly::constant(p.nvars(), p.field(), p.field().one())
                                : segment_poly(p, Segment{edge.to, seg.to, seg.last_edge})};
    d.summands.push_back(std::move(s));
  };
  for (const CutEdge& c : d.cuts.red_blue) add(c);
  for (const CutEdge& c : d.cuts.green_blue) add(c);
  return d;
}

Decomposition decompose(const Abp& p, NodeId u, NodeId v) { return decompose_segment(p, Segment{u, v, {}}); }

DecompositionCheck verify_decomposition(const Abp& p, const Decomposition& d, const Segment& seg) {
  DecompositionCheck check;
  const SegmentView view = view_segment(p, seg);
  const int n = degree(view.vars());

  std::set<EdgeIndex> red, green;
  for (const CutEdge& c : d.cuts.red_blue) red.insert(c.edge);
  for (const CutEdge& c : d.cuts.green_blue) green.insert(c.edge);
  check.disjoint = red.size() == d.cuts.red_blue.size() && green.size() == d.cuts.green_blue.size() &&
                   std::none_of(red.begin(), red.end(), [&](EdgeIndex e) { return green.count(e) > 0; }) &&
                   d.summands.size() == red.size() + green.size();

  auto in_segment = [&](EdgeIndex e) { return e < p.edges().size() && view.edge_in[e]; };
  check.red_bounds = std::all_of(red.begin(), red.end(), [&](EdgeIndex e) {
    if (!in_segment(e)) return false;
    const int x = degree(view.vars_from[p.edges()[e].from]);
    return n <= 3 * x && 3 * x <= 2 * n;
  });
  check.green_bounds = std::all_of(green.begin(), green.end(), [&](EdgeIndex e) {
    if (!in_segment(e)) return false;
    const Edge& edge = p.edges()[e];
    return 3 * (degree(view.vars_from[edge.from]) + degree(view.vars_to[edge.to])) <= 2 * n;
  });

  MultilinearPoly sum(p.nvars(), p.field());
  try {
    for (const Summand& s : d.summands) {
      MultilinearPoly term = s.label.is_var() ? poly_mul_var(s.left, s.label.var) : poly_scale(s.left, s.label.value);
      sum = poly_add(sum, poly_mul(term, s.right));
    }
    check.sum_matches = poly_equal_exact(sum, segment_poly(p, seg));
  } catch (const MultilinearityError&) {
    check.sum_matches = false;
  }
  return check;
}

DecompositionCheck verify_decomposition(const Abp& p, const Decomposition& d, NodeId u, NodeId v) {
  return verify_decomposition(p, d, Segment{u, v, {}});
}

}  // namespace abpkit
