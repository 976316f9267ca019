#pragma once

#include <vector>

#include "abpkit/abp.hpp"

namespace abpkit {

enum class Color : std::uint8_t { Uncolored, Blue, Red, Green };

/// Result of the threshold coloring of one subprogram. `n` is |X| of the
/// subprogram; `x_from[a]` is |X_{from,a}| for member nodes.
struct Coloring {
  Segment seg;
  int n = 0;
  std::vector<Color> color;
  std::vector<int> x_from;
};

/// Colors the sink blue, then repeatedly colors each uncolored in-segment
/// predecessor a of a blue node: blue if 3|X_{from,a}| > 2n, red if
/// n <= 3|X_{from,a}| <= 2n, green otherwise. Colors depend only on
/// |X_{from,a}|, so the fixpoint is independent of visiting order.
Coloring color_segment(const Abp& p, const Segment& seg);
Coloring color_nodes(const Abp& p, NodeId u, NodeId v);

/// One cut edge of the decomposition with the counts its bound refers to.
struct CutEdge {
  EdgeIndex edge;
  bool red;             // red -> blue (otherwise green -> blue)
  int x_from_tail;      // |X_{from, tail}|
  int x_from_head;      // |X_{from, head}|
  int x_head_to;        // |X_{head, to}| inside the subprogram
};

/// The cut edges only; the formula construction works from these.
struct CutSet {
  Segment seg;
  int n = 0;
  std::vector<CutEdge> red_blue;
  std::vector<CutEdge> green_blue;
};

/// Throws DegenerateInputError when the subprogram reads no variable.
CutSet find_cut_edges(const Abp& p, const Segment& seg);

struct Summand {
  EdgeIndex edge;
  MultilinearPoly left;   // [from, tail]
  Label label;
  MultilinearPoly right;  // [head, to] (respecting the segment's last edge)
};

struct Decomposition {
  CutSet cuts;
  std::vector<Summand> summands;  // red-blue summands first, then green-blue
};

/// [u,v] = sum over cut edges of [u,tail] * label * [head,v], with every u->v
/// path crossing exactly one cut edge. Throws MultilinearityError on
/// non-multilinear input and DegenerateInputError when |X_{u,v}| = 0.
Decomposition decompose(const Abp& p, NodeId u, NodeId v);
Decomposition decompose_segment(const Abp& p, const Segment& seg);

struct DecompositionCheck {
  bool sum_matches = false;
  bool red_bounds = false;    // n/3 <= |X_{from,tail}| <= 2n/3
  bool green_bounds = false;  // |X_{from,tail}| + |X_{head,to}| <= 2n/3
  bool disjoint = false;      // no edge in both lists; one summand per cut edge
  bool ok() const { return sum_matches && red_bounds && green_bounds && disjoint; }
};

/// Recomputes everything from `p`; nothing in `d` besides the edge lists and
/// summands is trusted.
DecompositionCheck verify_decomposition(const Abp& p, const Decomposition& d, NodeId u, NodeId v);
DecompositionCheck verify_decomposition(const Abp& p, const Decomposition& d, const Segment& seg);

}  // namespace abpkit
