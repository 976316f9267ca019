#include "abpkit/formula.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>

#include "abpkit/decompose.hpp"
#include "abpkit/errors.hpp"
#include "abpkit/rng.hpp"

namespace abpkit {

namespace {

using SegKey = std::tuple<NodeId, NodeId, std::uint32_t>;

SegKey key_of(const Segment& s) {
  return {s.from, s.to, s.last_edge ? *s.last_edge : ~std::uint32_t{0}};
}

class Builder {
 public:
  Builder(std::shared_ptr<const Abp> p, const FormulaOptions& opt)
      : p_(std::move(p)), opt_(opt), tau_(leaf_arity_bound(p_->nvars())) {}

  Formula run() {
    const std::uint32_t root = build(Segment{p_->source(), p_->sink(), {}});
    return Formula(p_, tau_, std::move(gates_), root, opt_.share_subformulas);
  }

 private:
  std::uint32_t add(Gate g) {
    if (gates_.size() >= opt_.max_gates) {
      throw BudgetExceeded("formula exceeded " + std::to_string(opt_.max_gates) + " gates", gates_.size());
    }
    gates_.push_back(std::move(g));
    return static_cast<std::uint32_t>(gates_.size() - 1);
  }

  std::uint32_t leaf(std::vector<Segment> segs) { return add(Gate{Gate::Kind::Leaf, {}, std::move(segs), {}}); }

  std::uint32_t one() {
    if (opt_.share_subformulas && one_) return *one_;
    const std::uint32_t g = add(Gate{Gate::Kind::Const, {}, {}, p_->field().one()});
    one_ = g;
    return g;
  }

  std::uint32_t times(std::uint32_t a, std::uint32_t b) { return add(Gate{Gate::Kind::Times, {a, b}, {}, {}}); }

  // [head, to] with the segment's forced last edge; the empty path when head == to.
  std::uint32_t build_right(NodeId head, const Segment& seg) {
    if (head == seg.to) return one();
    return build(Segment{head, seg.to, seg.last_edge});
  }

  const CutSet& cuts_of(const Segment& seg) {
    auto it = cut_memo_.find(key_of(seg));
    if (it == cut_memo_.end()) it = cut_memo_.emplace(key_of(seg), find_cut_edges(*p_, seg)).first;
    return it->second;
  }

  std::uint32_t build(const Segment& seg) {
    if (opt_.share_subformulas) {
      if (auto it = gate_memo_.find(key_of(seg)); it != gate_memo_.end()) return it->second;
    }
    const std::uint32_t g = build_fresh(seg);
    if (opt_.share_subformulas) gate_memo_.emplace(key_of(seg), g);
    return g;
  }

  std::uint32_t build_fresh(const Segment& seg) {
    if (degree(segment_vars(*p_, seg)) <= tau_) return leaf({seg});

    const CutSet& cuts = cuts_of(seg);
    std::vector<std::uint32_t> summands;
    for (const CutEdge& cut : cuts.red_blue) {
      const Edge& e = p_->edges()[cut.edge];
      const Segment left{seg.from, e.to, cut.edge};
      if (left == seg) {
        // Only possible for |X| <= 3: the cut is the segment's own last edge,
        // so split it off instead of recursing on the same subprogram.
        const std::uint32_t head = build(Segment{seg.from, e.from, {}});
        summands.push_back(times(head, leaf({Segment{e.from, e.to, cut.edge}})));
        continue;
      }
      const std::uint32_t l = build(left);
      const std::uint32_t r = build_right(e.to, seg);
      summands.push_back(times(l, r));
    }
    for (const CutEdge& cut : cuts.green_blue) {
      const Edge& e = p_->edges()[cut.edge];
      const Segment left{seg.from, e.to, cut.edge};
      const int together = cut.x_from_tail + cut.x_head_to;
      if (together * together < p_->nvars()) {
        std::vector<Segment> fused{left};
        if (e.to != seg.to) fused.push_back(Segment{e.to, seg.to, seg.last_edge});
        summands.push_back(times(leaf(std::move(fused)), one()));
        continue;
      }
      const std::uint32_t l = build(left);
      const std::uint32_t r = build_right(e.to, seg);
      summands.push_back(times(l, r));
    }
    return add(Gate{Gate::Kind::Plus, std::move(summands), {}, {}});
  }

  std::shared_ptr<const Abp> p_;
  FormulaOptions opt_;
  int tau_;
  std::vector<Gate> gates_;
  std::map<SegKey, CutSet> cut_memo_;
  std::map<SegKey, std::uint32_t> gate_memo_;
  std::optional<std::uint32_t> one_;
};

}  // namespace

Formula::Formula(std::shared_ptr<const Abp> abp, int tau, std::vector<Gate> gates, std::uint32_t root, bool shared)
    : abp_(std::move(abp)), tau_(tau), gates_(std::move(gates)), root_(root), shared_(shared) {
  if (!abp_) throw ValidationError("formula needs an ABP");
  if (root_ >= gates_.size()) throw ValidationError("formula root out of range");
  for (std::uint32_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    for (std::uint32_t c : gate.children) {
      if (c >= g) throw ValidationError("formula gates must list children before parents");
    }
    switch (gate.kind) {
      case Gate::Kind::Times:
        if (gate.children.size() != 2) throw ValidationError("times gate needs exactly two children");
        break;
      case Gate::Kind::Plus:
        if (gate.children.empty()) throw ValidationError("plus gate without children");
        break;
      case Gate::Kind::Leaf:
        if (gate.segments.empty() || gate.segments.size() > 2) {
          throw ValidationError("leaf must reference one or two subprograms");
        }
        if (gate.segments.size() == 2 && gate.segments[0].to != gate.segments[1].from) {
          throw ValidationError("fused leaf subprograms must chain");
        }
        for (const Segment& s : gate.segments) {
          abp_->layer_of(s.from);
          abp_->layer_of(s.to);
          if (s.last_edge) abp_->edge(*s.last_edge);
        }
        break;
      case Gate::Kind::Const:
        break;
    }
  }
}

int leaf_arity_bound(int nvars) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(nvars)));
  while (r * r < nvars) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= nvars) --r;
  return r;
}

Formula abp_to_formula(std::shared_ptr<const Abp> p, const FormulaOptions& options) {
  Formula f = Builder(std::move(p), options).run();
  if (options.assert_invariants) {
    const FormulaInvariants inv = check_formula_invariants(f);
    if (!inv.ok()) {
      throw InternalContradiction("constructed formula violates its invariants (depth " + std::to_string(inv.depth) +
                                  ", max leaf arity " + std::to_string(inv.max_leaf_arity) + ")");
    }
  }
  return f;
}

Formula abp_to_formula(const Abp& p, const FormulaOptions& options) {
  return abp_to_formula(std::make_shared<const Abp>(p), options);
}

Monomial leaf_vars(const Formula& f, std::uint32_t gate) {
  const Gate& g = f.gate(gate);
  Monomial m = 0;
  for (const Segment& s : g.segments) m |= segment_vars(f.abp(), s);
  return m;
}

MultilinearPoly leaf_poly(const Formula& f, std::uint32_t gate) {
  const Gate& g = f.gate(gate);
  const Abp& p = f.abp();
  if (g.kind == Gate::Kind::Const) return MultilinearPoly::constant(p.nvars(), p.field(), g.value);
  if (g.kind != Gate::Kind::Leaf) throw ValidationError("gate is not a leaf");
  MultilinearPoly acc = segment_poly(p, g.segments[0]);
  for (std::size_t i = 1; i < g.segments.size(); ++i) acc = poly_mul(acc, segment_poly(p, g.segments[i]));
  return acc;
}

MultilinearPoly formula_poly(const Formula& f) {
  const auto& gates = f.gates();
  std::vector<int> refs(gates.size(), 0);
  for (const Gate& g : gates) {
    for (std::uint32_t c : g.children) ++refs[c];
  }
  std::map<std::vector<SegKey>, MultilinearPoly> leaf_cache;
  std::vector<std::optional<MultilinearPoly>> value(gates.size());
  auto take = [&](std::uint32_t c) -> MultilinearPoly {
    if (--refs[c] == 0) {
      MultilinearPoly v = std::move(*value[c]);
      value[c].reset();
      return v;
    }
    return *value[c];
  };
  const Abp& p = f.abp();
  for (std::uint32_t g = 0; g <= f.root(); ++g) {
    const Gate& gate = gates[g];
    switch (gate.kind) {
      case Gate::Kind::Const:
        value[g] = MultilinearPoly::constant(p.nvars(), p.field(), gate.value);
        break;
      case Gate::Kind::Leaf: {
        std::vector<SegKey> key;
        for (const Segment& s : gate.segments) key.push_back(key_of(s));
        auto it = leaf_cache.find(key);
        if (it == leaf_cache.end()) it = leaf_cache.emplace(key, leaf_poly(f, g)).first;
        value[g] = it->second;
        break;
      }
      case Gate::Kind::Times: {
        MultilinearPoly a = take(gate.children[0]);
        value[g] = poly_mul(a, take(gate.children[1]));
        break;
      }
      case Gate::Kind::Plus: {
        MultilinearPoly acc(p.nvars(), p.field());
        for (std::uint32_t c : gate.children) acc = poly_add(acc, take(c));
        value[g] = std::move(acc);
        break;
      }
    }
  }
  return std::move(*value[f.root()]);
}

Fe formula_eval(const Formula& f, std::span<const Fe> point) {
  const Abp& p = f.abp();
  const PrimeField& F = p.field();
  std::map<std::vector<SegKey>, Fe> leaf_cache;
  std::vector<Fe> value(f.size(), F.zero());
  for (std::uint32_t g = 0; g <= f.root(); ++g) {
    const Gate& gate = f.gates()[g];
    switch (gate.kind) {
      case Gate::Kind::Const:
        value[g] = gate.value;
        break;
      case Gate::Kind::Leaf: {
        std::vector<SegKey> key;
        for (const Segment& s : gate.segments) key.push_back(key_of(s));
        auto it = leaf_cache.find(key);
        if (it == leaf_cache.end()) {
          Fe v = F.one();
          for (const Segment& s : gate.segments) v = F.mul(v, segment_eval(p, s, point));
          it = leaf_cache.emplace(key, v).first;
        }
        value[g] = it->second;
        break;
      }
      case Gate::Kind::Times:
        value[g] = F.mul(value[gate.children[0]], value[gate.children[1]]);
        break;
      case Gate::Kind::Plus:
        for (std::uint32_t c : gate.children) value[g] = F.add(value[g], value[c]);
        break;
    }
  }
  return value[f.root()];
}

bool formula_matches_abp_randomized(const Formula& f, std::uint64_t seed, int trials) {
  Rng rng(seed);
  const PrimeField& F = f.abp().field();
  std::vector<Fe> point(static_cast<std::size_t>(f.nvars()));
  for (int t = 0; t < trials; ++t) {
    for (Fe& x : point) x = Fe{rng.below(F.prime())};
    if (formula_eval(f, point) != abp_eval(f.abp(), point)) return false;
  }
  return true;
}

int formula_depth(const Formula& f) {
  std::vector<int> depth(f.size(), 0);
  for (std::uint32_t g = 0; g < f.size(); ++g) {
    for (std::uint32_t c : f.gates()[g].children) depth[g] = std::max(depth[g], depth[c] + 1);
  }
  return depth[f.root()];
}

double formula_depth_bound(int nvars) {
  const double levels = nvars <= 1 ? 0.0 : std::log(static_cast<double>(nvars)) / std::log(1.5);
  return 2.0 * levels + 2.0;
}

FormulaInvariants check_formula_invariants(const Formula& f) {
  FormulaInvariants inv;
  std::vector<Monomial> vars(f.size(), 0);
  for (std::uint32_t g = 0; g < f.size(); ++g) {
    const Gate& gate = f.gates()[g];
    switch (gate.kind) {
      case Gate::Kind::Const:
        break;
      case Gate::Kind::Leaf:
        vars[g] = leaf_vars(f, g);
        inv.max_leaf_arity = std::max(inv.max_leaf_arity, degree(vars[g]));
        if (degree(vars[g]) > f.tau()) inv.leaf_arity = false;
        break;
      case Gate::Kind::Times:
        if (vars[gate.children[0]] & vars[gate.children[1]]) inv.times_disjoint = false;
        vars[g] = vars[gate.children[0]] | vars[gate.children[1]];
        break;
      case Gate::Kind::Plus:
        for (std::uint32_t c : gate.children) vars[g] |= vars[c];
        break;
    }
  }
  inv.depth = formula_depth(f);
  inv.depth_ok = inv.depth <= formula_depth_bound(f.nvars());
  return inv;
}

Formula unshare(const Formula& f, std::uint64_t max_gates) {
  if (!f.shared()) return f;
  std::vector<Gate> out;
  // Post-order copy from the root; explicit stack keeps deep formulas safe.
  struct Frame {
    std::uint32_t gate;
    std::size_t next = 0;
    std::vector<std::uint32_t> copied;
  };
  std::vector<Frame> stack{{f.root(), 0, {}}};
  std::uint32_t last = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const Gate& g = f.gate(top.gate);
    if (top.next < g.children.size()) {
      const std::uint32_t child = g.children[top.next++];
      stack.push_back(Frame{child, 0, {}});
      continue;
    }
    if (out.size() >= max_gates) throw BudgetExceeded("unsharing exceeded gate cap", out.size());
    Gate copy = g;
    copy.children = std::move(top.copied);
    out.push_back(std::move(copy));
    last = static_cast<std::uint32_t>(out.size() - 1);
    stack.pop_back();
    if (!stack.empty()) stack.back().copied.push_back(last);
  }
  return Formula(f.abp_ptr(), f.tau(), std::move(out), last, false);
}

}  // namespace abpkit
