#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abpkit/abp.hpp"
#include "abpkit/formula.hpp"

namespace abpkit {

struct PassResult {
  Abp q;
  /// copies[u][i]: node of Q holding the paths of P into u that were routed to band i.
  std::vector<std::vector<std::optional<NodeId>>> copies;
  /// Per node of Q: inserted only for layering (Const(1) chains and the new sink).
  std::vector<char> padding;
  /// First layer of each band; band i spans [band_first_layer[i], band_first_layer[i+1]).
  std::vector<int> band_first_layer;
  /// Node copies created before dead copies were dropped.
  std::size_t copies_created = 0;

  std::size_t non_padding_nodes() const;
};

/// Builds an L-pass program computing the same polynomial. Every path of P is
/// routed through bands 1..L: a variable edge leaving a copy in band i goes to
/// the smallest band m >= i whose order stays consistent for all paths into
/// that copy; constant edges stay in band. Layers are then assigned by
/// (band, position in that band's order) so each band reads every variable in
/// at most one layer.
///
/// Throws OrderViolation if P is not ordered for `orders`, and
/// InternalContradiction ("routing conflict") if some copy has no admissible
/// band for an outgoing edge. The latter can happen on ordered inputs whose
/// paths are merged into one copy but disagree on the order they need.
PassResult order_to_pass(const Abp& p, const OrderList& orders);

/// [s,u]_P equals the sum over bands of [s', copy(u,i)]_Q for every node u of P.
/// `failed` receives the first failing node when given.
bool verify_band_claim(const Abp& p, const PassResult& r, NodeId* failed = nullptr);

/// Within each band, the variable layers appear in increasing order of that band's permutation.
bool check_band_purity(const PassResult& r, const OrderList& orders);

/// Variable precedence inside a leaf: pairs (x, y) such that some path reads x before y.
struct LeafOrderInfo {
  Monomial vars = 0;
  bool symmetric_pair = false;  // some x before y on one path and y before x on another
  bool cyclic = false;          // the precedence relation has a cycle (no single order fits)
};

LeafOrderInfo leaf_order_info(const Formula& f, std::uint32_t gate);

struct RoabpCensus {
  std::int64_t non_roabp_leaves = 0;  // max over parse trees, leaves with a symmetric pair
  std::int64_t cyclic_leaves = 0;     // max over parse trees, leaves with any precedence cycle (reported only)
  int bound = 0;                      // floor(log2 L)
  std::uint64_t parse_trees = 0;
  bool ok() const { return non_roabp_leaves <= bound; }
};

RoabpCensus roabp_leaf_census(const Formula& f, int num_orders);
RoabpCensus roabp_leaf_census(const Abp& p, const OrderList& orders, const FormulaOptions& options = {});

}  // namespace abpkit
