#include <algorithm>
#include <limits>
#include <unordered_map>

#include "abpkit/errors.hpp"
#include "abpkit/formula.hpp"

namespace abpkit {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::uint64_t>::max() / b ? std::numeric_limits<std::uint64_t>::max() : a * b;
}


}  // namespace

ParseTreeCursor::ParseTreeCursor(const Formula& f) : f_(&f) {
  if (f.shared()) throw ValidationError("parse-tree enumeration needs a tree-shaped formula; unshare first");
  rank_.assign(f.size(), 0);
  std::vector<std::uint32_t> stack{f.root()};
  while (!stack.empty()) {
    const std::uint32_t g = stack.back();
    stack.pop_back();
    rank_[g] = static_cast<std::uint32_t>(preorder_.size());
    preorder_.push_back(g);
    const auto& ch = f.gate(g).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  choice_.assign(f.size(), 0);
  rebuild();
}

void ParseTreeCursor::rebuild() {
  current_.choices.clear();
  current_.leaves.clear();
  std::vector<std::uint32_t> stack{f_->root()};
  while (!stack.empty()) {
    const std::uint32_t g = stack.back();
    stack.pop_back();
    const Gate& gate = f_->gate(g);
    switch (gate.kind) {
      case Gate::Kind::Plus:
        current_.choices.emplace_back(g, choice_[g]);
        stack.push_back(gate.children[choice_[g]]);
        break;
      case Gate::Kind::Times:
        stack.push_back(gate.children[1]);
        stack.push_back(gate.children[0]);
        break;
      default:
        current_.leaves.push_back(g);
        break;
    }
  }
}

bool ParseTreeCursor::next() {
  // Odometer over the retained plus gates, last in preorder moving fastest.
  for (auto it = current_.choices.rbegin(); it != current_.choices.rend(); ++it) {
    const std::uint32_t g = it->first;
    if (choice_[g] + 1 < f_->gate(g).children.size()) {
      ++choice_[g];
      for (std::size_t r = rank_[g] + 1; r < preorder_.size(); ++r) choice_[preorder_[r]] = 0;
      rebuild();
      return true;
    }
  }
  return false;
}

std::uint64_t count_parse_trees(const Formula& f) {
  std::vector<std::uint64_t> n(f.size(), 0);
  for (std::uint32_t g = 0; g <= f.root(); ++g) {
    const Gate& gate = f.gates()[g];
    switch (gate.kind) {
      case Gate::Kind::Plus:
        for (std::uint32_t c : gate.children) n[g] = sat_add(n[g], n[c]);
        break;
      case Gate::Kind::Times:
        n[g] = sat_mul(n[gate.children[0]], n[gate.children[1]]);
        break;
      default:
        n[g] = 1;
        break;
    }
  }
  return n[f.root()];
}

void enumerate_parse_trees(const Formula& f, std::uint64_t cap, const std::function<void(const ParseTree&)>& visit) {
  ParseTreeCursor cursor(f);
  std::uint64_t seen = 0;
  do {
    if (seen == cap) throw BudgetExceeded("parse-tree enumeration exceeded cap", seen);
    visit(cursor.current());
    ++seen;
  } while (cursor.next());
}

MultilinearPoly parse_tree_value(const Formula& f, const ParseTree& t) {
  MultilinearPoly acc = MultilinearPoly::constant(f.nvars(), f.abp().field(), f.abp().field().one());
  for (std::uint32_t leaf : t.leaves) acc = poly_mul(acc, leaf_poly(f, leaf));
  return acc;
}

std::int64_t max_over_parse_trees(const Formula& f, const std::function<std::int64_t(std::uint32_t leaf)>& weight) {
  std::vector<std::int64_t> best(f.size(), 0);
  for (std::uint32_t g = 0; g <= f.root(); ++g) {
    const Gate& gate = f.gates()[g];
    switch (gate.kind) {
      case Gate::Kind::Plus: {
        std::int64_t m = std::numeric_limits<std::int64_t>::min();
        for (std::uint32_t c : gate.children) m = std::max(m, best[c]);
        best[g] = m;
        break;
      }
      case Gate::Kind::Times:
        best[g] = best[gate.children[0]] + best[gate.children[1]];
        break;
      default:
        best[g] = weight(g);
        break;
    }
  }
  return best[f.root()];
}

LeafStats parse_tree_leaf_stats(const Formula& f) {
  LeafStats s;
  s.max_leaves = max_over_parse_trees(
      f, [&](std::uint32_t g) -> std::int64_t { return f.gate(g).kind == Gate::Kind::Leaf && leaf_vars(f, g) ? 1 : 0; });
  s.bound = 3 * static_cast<std::int64_t>(f.tau());
  s.parse_trees = count_parse_trees(f);
  return s;
}

Depth4Form flatten_depth4(const Formula& f, std::uint64_t cap) {
  const PrimeField& F = f.abp().field();
  Depth4Form d{f.nvars(), f.tau(), F, {}};
  std::unordered_map<std::uint32_t, std::pair<MultilinearPoly, Monomial>> cache;
  auto leaf = [&](std::uint32_t g) -> const std::pair<MultilinearPoly, Monomial>& {
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, std::make_pair(leaf_poly(f, g), leaf_vars(f, g))).first;
    return it->second;
  };
  enumerate_parse_trees(f, cap, [&](const ParseTree& t) {
    Depth4Product prod{F.one(), {}, {}};
    for (std::uint32_t g : t.leaves) {
      const auto& [poly, vars] = leaf(g);
      if (vars == 0) {
        // Reads no variable, so the polynomial is a constant.
        prod.coeff = F.mul(prod.coeff, poly.constant_term());
        continue;
      }
      prod.factors.push_back(poly);
      prod.factor_vars.push_back(vars);
    }
    d.products.push_back(std::move(prod));
  });
  return d;
}

MultilinearPoly depth4_poly(const Depth4Form& d) {
  MultilinearPoly sum(d.nvars, d.field);
  for (const Depth4Product& prod : d.products) {
    MultilinearPoly term = MultilinearPoly::constant(d.nvars, d.field, prod.coeff);
    for (const MultilinearPoly& factor : prod.factors) term = poly_mul(term, factor);
    sum = poly_add(sum, term);
  }
  return sum;
}

Fe depth4_eval(const Depth4Form& d, std::span<const Fe> point) {
  const PrimeField& F = d.field;
  Fe sum = F.zero();
  for (const Depth4Product& prod : d.products) {
    Fe term = prod.coeff;
    for (const MultilinearPoly& factor : prod.factors) term = F.mul(term, poly_eval(factor, point));
    sum = F.add(sum, term);
  }
  return sum;
}

}  // namespace abpkit
