#include "abpkit/paths.hpp"

#include <deque>
#include <limits>
#include <string>

#include "abpkit/errors.hpp"

namespace abpkit {

std::uint64_t count_paths(const Abp& p, const Segment& seg) {
  const SegmentView view = view_segment(p, seg);
  if (view.empty()) return 0;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> count(p.num_nodes(), 0);
  count[seg.from] = 1;
  for (NodeId u : view.topo) {
    for (EdgeIndex e : p.out_edges(u)) {
      if (!view.edge_in[e]) continue;
      std::uint64_t& c = count[p.edges()[e].to];
      c = (c > kMax - count[u]) ? kMax : c + count[u];
    }
  }
  return count[seg.to];
}

void for_each_path(const Abp& p, const Segment& seg, std::uint64_t cap,
                   const std::function<void(std::span<const EdgeIndex>)>& visit) {
  const SegmentView view = view_segment(p, seg);
  if (view.empty()) return;
  std::uint64_t emitted = 0;
  Path stack;
  // Iterative DFS over (node, next out-edge position).
  std::vector<std::pair<NodeId, std::size_t>> frames{{seg.from, 0}};
  while (!frames.empty()) {
    auto& [u, pos] = frames.back();
    if (u == seg.to && pos == 0) {
      if (++emitted > cap) throw BudgetExceeded("path enumeration exceeded cap", emitted - 1);
      visit(stack);
      frames.pop_back();
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    auto outs = p.out_edges(u);
    while (pos < outs.size() && !view.edge_in[outs[pos]]) ++pos;
    if (pos == outs.size()) {
      frames.pop_back();
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    const EdgeIndex e = outs[pos++];
    stack.push_back(e);
    frames.emplace_back(p.edges()[e].to, 0);
  }
}

MultilinearPoly path_weight(const Abp& p, std::span<const EdgeIndex> path) {
  const PrimeField& F = p.field();
  Fe coeff = F.one();
  Monomial mono = 0;
  for (EdgeIndex e : path) {
    const Label& l = p.edge(e).label;
    if (l.is_var()) {
      if (mono & var_bit(l.var)) throw MultilinearityError("path repeats x" + std::to_string(l.var));
      mono |= var_bit(l.var);
    } else {
      coeff = F.mul(coeff, l.value);
    }
  }
  return MultilinearPoly::from_terms(p.nvars(), F, {{mono, coeff}});
}

std::optional<Monomial> path_vars(const Abp& p, std::span<const EdgeIndex> path) {
  Monomial mono = 0;
  for (EdgeIndex e : path) {
    const Label& l = p.edge(e).label;
    if (!l.is_var()) continue;
    if (mono & var_bit(l.var)) return std::nullopt;
    mono |= var_bit(l.var);
  }
  return mono;
}

MultilinearPoly path_sum_poly(const Abp& p, const Segment& seg, std::uint64_t cap) {
  std::vector<Term> terms;
  for_each_path(p, seg, cap, [&](std::span<const EdgeIndex> path) {
    const MultilinearPoly w = path_weight(p, path);
    if (!w.is_zero()) terms.push_back(w.terms()[0]);
  });
  return MultilinearPoly::from_terms(p.nvars(), p.field(), std::move(terms));
}

std::optional<Path> find_path(const Abp& p, NodeId u, NodeId v) {
  if (u == v) return Path{};
  const int target_layer = p.layer_of(v);
  std::vector<std::optional<EdgeIndex>> via(p.num_nodes());
  std::vector<char> seen(p.num_nodes(), 0);
  std::deque<NodeId> queue{u};
  seen[u] = 1;
  while (!queue.empty()) {
    NodeId a = queue.front();
    queue.pop_front();
    if (a == v) break;
    if (p.layer_of(a) >= target_layer) continue;
    for (EdgeIndex e : p.out_edges(a)) {
      NodeId b = p.edges()[e].to;
      if (seen[b]) continue;
      seen[b] = 1;
      via[b] = e;
      queue.push_back(b);
    }
  }
  if (!seen[v]) return std::nullopt;
  Path rev;
  for (NodeId a = v; a != u; a = p.edges()[*via[a]].from) rev.push_back(*via[a]);
  return Path(rev.rbegin(), rev.rend());
}

}  // namespace abpkit
