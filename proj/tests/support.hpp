#pragma once
// Builders and brute-force oracles shared by the test binaries. The oracles
// deliberately avoid the library's own DP and path code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "abpkit/abp.hpp"
#include "abpkit/field.hpp"
#include "abpkit/poly.hpp"

namespace testing_support {

using namespace abpkit;

inline const PrimeField kF{};

struct E {
  NodeId from, to;
  int var;           // > 0: variable, 0: constant
  std::int64_t c = 1;
};

inline Abp make_abp(int nvars, std::vector<std::vector<NodeId>> layers, const std::vector<E>& es,
                    const PrimeField& f = kF) {
  std::vector<Edge> edges;
  for (const E& e : es) {
    edges.push_back({e.from, e.to, e.var > 0 ? Label::Var(e.var) : Label::Const(f.from_i64(e.c))});
  }
  return Abp(nvars, f, std::move(layers), std::move(edges));
}

/// s -x_{v0}-> . -x_{v1}-> ... -> t, one edge per layer.
inline Abp chain(int nvars, const std::vector<int>& vars) {
  std::vector<std::vector<NodeId>> layers;
  std::vector<E> es;
  for (NodeId i = 0; i <= vars.size(); ++i) layers.push_back({i});
  for (NodeId i = 0; i < vars.size(); ++i) es.push_back({i, i + 1, vars[i]});
  return make_abp(nvars, layers, es);
}

/// s -> {a, b} -> t reading x1 x2 on one side and x2 x1 on the other.
inline Abp diamond() {
  return make_abp(2, {{0}, {1, 2}, {3}}, {{0, 1, 1}, {1, 3, 2}, {0, 2, 2}, {2, 3, 1}});
}

inline std::vector<std::vector<EdgeIndex>> all_paths(const Abp& p, NodeId u, NodeId v) {
  std::vector<std::vector<EdgeIndex>> out;
  std::vector<EdgeIndex> cur;
  std::function<void(NodeId)> go = [&](NodeId x) {
    if (x == v) {
      out.push_back(cur);
      return;
    }
    for (EdgeIndex e = 0; e < p.edges().size(); ++e) {
      if (p.edges()[e].from != x) continue;
      cur.push_back(e);
      go(p.edges()[e].to);
      cur.pop_back();
    }
  };
  go(u);
  return out;
}

/// Sequence of variables read on a path.
inline std::vector<int> path_var_seq(const Abp& p, const std::vector<EdgeIndex>& path) {
  std::vector<int> out;
  for (EdgeIndex e : path) {
    if (p.edges()[e].label.is_var()) out.push_back(p.edges()[e].label.var);
  }
  return out;
}

/// Coefficient map of [u,v] by explicit path enumeration; nullopt if some path repeats a variable.
inline std::optional<std::map<Monomial, std::uint64_t>> brute_poly(const Abp& p, NodeId u, NodeId v) {
  const PrimeField& F = p.field();
  std::map<Monomial, std::uint64_t> acc;
  for (const auto& path : all_paths(p, u, v)) {
    Monomial m = 0;
    Fe c = F.one();
    for (EdgeIndex e : path) {
      const Label& l = p.edges()[e].label;
      if (l.is_var()) {
        if (m & var_bit(l.var)) return std::nullopt;
        m |= var_bit(l.var);
      } else {
        c = F.mul(c, l.value);
      }
    }
    acc[m] = F.add(Fe{acc[m]}, c).v;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
  return acc;
}

inline std::map<Monomial, std::uint64_t> coeff_map(const MultilinearPoly& f) {
  std::map<Monomial, std::uint64_t> out;
  for (const Term& t : f.terms()) out[t.mono] = t.coeff.v;
  return out;
}

inline MultilinearPoly poly_of(int nvars, std::vector<std::pair<std::vector<int>, std::int64_t>> terms,
                               const PrimeField& f = kF) {
  std::vector<Term> ts;
  for (auto& [vars, c] : terms) ts.push_back({monomial_of(std::span<const int>(vars)), f.from_i64(c)});
  return MultilinearPoly::from_terms(nvars, f, std::move(ts));
}

/// Rank of a dense matrix over F_p by plain Gaussian elimination.
inline int dense_rank(std::vector<std::vector<std::uint64_t>> a, const PrimeField& F) {
  int r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Fe inv = F.inv(Fe{a[r][c]});
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == static_cast<std::size_t>(r) || a[i][c] == 0) continue;
      const Fe factor = F.mul(Fe{a[i][c]}, inv);
      for (std::size_t j = c; j < cols; ++j) a[i][j] = F.sub(Fe{a[i][j]}, F.mul(factor, Fe{a[r][j]})).v;
    }
    ++r;
  }
  return r;
}

/// Rank of the partial derivative matrix built directly from a side/slot assignment.
inline int oracle_pd_rank(const MultilinearPoly& f, const std::vector<int>& y_slot, const std::vector<int>& z_slot) {
  const int m = f.nvars() / 2;
  std::vector<std::vector<std::uint64_t>> a(std::size_t{1} << m, std::vector<std::uint64_t>(std::size_t{1} << m, 0));
  for (const Term& t : f.terms()) {
    std::size_t row = 0, col = 0;
    for (int v : vars_of(t.mono)) {
      if (y_slot[v - 1] > 0) row |= std::size_t{1} << (y_slot[v - 1] - 1);
      else col |= std::size_t{1} << (z_slot[v - 1] - 1);
    }
    a[row][col] = t.coeff.v;
  }
  return dense_rank(std::move(a), f.field());
}

}  // namespace testing_support
