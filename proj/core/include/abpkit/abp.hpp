#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "abpkit/field.hpp"
#include "abpkit/poly.hpp"

namespace abpkit {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Edge label: a variable x_i or a field constant.
struct Label {
  enum class Kind : std::uint8_t { Var, Const };

  Kind kind = Kind::Const;
  int var = 0;  // 1-based, meaningful when kind == Var
  Fe value{};   // meaningful when kind == Const

  static Label Var(int i) { return Label{Kind::Var, i, Fe{}}; }
  static Label Const(Fe c) { return Label{Kind::Const, 0, c}; }

  bool is_var() const noexcept { return kind == Kind::Var; }
  Monomial vars() const noexcept { return is_var() ? var_bit(var) : Monomial{0}; }

  friend bool operator==(const Label& a, const Label& b) {
    return a.kind == b.kind && (a.is_var() ? a.var == b.var : a.value == b.value);
  }
};

struct Edge {
  NodeId from;
  NodeId to;
  Label label;
};

/// Layered algebraic branching program. Node ids are 0..num_nodes()-1, each in
/// exactly one layer; layer 0 holds only the source and the last layer only the
/// sink. Parallel edges are allowed.
class Abp {
 public:
  /// Validates layering, id density, label ranges; throws ValidationError.
  Abp(int nvars, PrimeField field, std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges);

  int nvars() const noexcept { return nvars_; }
  const PrimeField& field() const noexcept { return field_; }
  const std::vector<std::vector<NodeId>>& layers() const noexcept { return layers_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex e) const;
  std::size_t num_nodes() const noexcept { return layer_of_.size(); }
  int num_layers() const noexcept { return static_cast<int>(layers_.size()); }
  NodeId source() const noexcept { return layers_.front().front(); }
  NodeId sink() const noexcept { return layers_.back().front(); }
  bool has_node(NodeId u) const noexcept { return u < layer_of_.size(); }
  /// Throws LookupError for unknown ids.
  int layer_of(NodeId u) const;
  std::span<const EdgeIndex> out_edges(NodeId u) const;
  std::span<const EdgeIndex> in_edges(NodeId u) const;

 private:
  int nvars_;
  PrimeField field_;
  std::vector<std::vector<NodeId>> layers_;
  std::vector<Edge> edges_;
  std::vector<int> layer_of_;
  std::vector<std::uint32_t> out_offsets_, in_offsets_;
  std::vector<EdgeIndex> out_list_, in_list_;
};

/// A subprogram: all paths from `from` to `to`; when `last_edge` is set, only
/// those paths whose final edge is that edge (so the subprogram computes
/// [from, tail] * label(last_edge)). from == to without a last edge is the
/// empty path.
struct Segment {
  NodeId from;
  NodeId to;
  std::optional<EdgeIndex> last_edge;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Nodes and edges participating in some path of a segment, plus the
/// per-node variable sets reachable inside it.
struct SegmentView {
  Segment seg;
  std::vector<char> node_in;
  std::vector<char> edge_in;
  std::vector<NodeId> topo;      // members ordered by layer, starting at seg.from
  std::vector<Monomial> vars_from;  // X_{from, a}, indexed by node id (members only)
  std::vector<Monomial> vars_to;    // X_{a, to} inside the segment, indexed by node id
  bool empty() const noexcept { return topo.empty(); }
  Monomial vars() const noexcept { return empty() ? 0 : vars_from[seg.to]; }
};

SegmentView view_segment(const Abp& p, const Segment& seg);

/// X_{u,v}: variables labelling some u -> v path. Empty when u == v or no path exists.
Monomial subprogram_vars(const Abp& p, NodeId u, NodeId v);
Monomial segment_vars(const Abp& p, const Segment& seg);

/// [u,v] as a sum over paths, by layer-by-layer dynamic programming; [u,u] = 1.
/// Throws MultilinearityError if a path inside the subprogram repeats a variable.
MultilinearPoly subprogram_poly(const Abp& p, NodeId u, NodeId v);
MultilinearPoly segment_poly(const Abp& p, const Segment& seg);
/// [s,t].
MultilinearPoly abp_poly(const Abp& p);

/// Value of the segment's polynomial at a point (no expansion).
Fe segment_eval(const Abp& p, const Segment& seg, std::span<const Fe> point);
Fe abp_eval(const Abp& p, std::span<const Fe> point);

/// Path as a list of edge indices.
using Path = std::vector<EdgeIndex>;

struct SmCheck {
  bool ok = true;
  Path witness;  // s -> t path reading some variable twice, when !ok
};

/// Exact: an s->t path repeats x_k iff some x_k-edge (a,b) with a reachable
/// from s has x_k in X_{b,t}.
SmCheck is_syntactic_multilinear(const Abp& p);

struct LPass {
  int count = 0;
  std::vector<int> cut_layers;  // first layer index of each ROABP segment
};

struct Classification {
  bool oblivious = false;
  bool roabp = false;
  std::optional<LPass> l_pass;  // set iff oblivious
};

Classification classify(const Abp& p);

/// Variable read order: order[k] is the variable read at position k+1.
class Permutation {
 public:
  /// Throws ValidationError unless `order` is a bijection on {1..n}.
  explicit Permutation(std::vector<int> order);
  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(order_.size()); }
  /// Variable at 1-based position `pos`.
  int at(int pos) const { return order_[static_cast<std::size_t>(pos - 1)]; }
  /// 1-based position of variable `var`.
  int position_of(int var) const { return pos_[static_cast<std::size_t>(var - 1)]; }
  const std::vector<int>& order() const noexcept { return order_; }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.order_ == b.order_; }

 private:
  std::vector<int> order_;
  std::vector<int> pos_;
};

using OrderList = std::vector<Permutation>;

/// Throws ValidationError unless all entries are permutations of {1..nvars} and pairwise distinct.
void validate_orders(const OrderList& orders, int nvars);

/// True iff the variable sequence of `path` is increasing in `pi`'s positions.
bool path_consistent(const Abp& p, std::span<const EdgeIndex> path, const Permutation& pi);

struct OrderCheck {
  bool ok = true;
  Path witness;  // s -> t path consistent with none of the orders
};

/// Auto-selects enumeration (at most `enumeration_limit` paths) or the signature DP.
OrderCheck check_ordered(const Abp& p, const OrderList& orders,
                         std::uint64_t enumeration_limit = 1'000'000);
OrderCheck check_ordered_by_enumeration(const Abp& p, const OrderList& orders,
                                        std::uint64_t path_cap = 1'000'000);
/// Tracks per node the set of distinct (per-order max position or "broken")
/// signatures of incoming paths; exact. Throws BudgetExceeded past `signature_cap` per node.
OrderCheck check_ordered_by_signatures(const Abp& p, const OrderList& orders,
                                       std::size_t signature_cap = 1'000'000);

/// Dead-node pruning, removal of Const(0) edges, in/out-degree <= 2 via Const(1)
/// trees, and re-layering by subdividing long edges. Output computes the same polynomial.
Abp normalize(const Abp& p);

/// True iff every node is on an s->t path and every in/out degree is at most 2.
bool is_normalized(const Abp& p);

}  // namespace abpkit
