#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "abpkit/abp.hpp"

namespace abpkit {

struct Gate {
  enum class Kind : std::uint8_t { Plus, Times, Leaf, Const };

  Kind kind;
  std::vector<std::uint32_t> children;  // Plus: any fan-in, Times: exactly 2
  std::vector<Segment> segments;        // Leaf: one subprogram, or two chained ones (fused green case)
  Fe value{};                           // Const
};

/// Syntactic multilinear formula whose leaves are subprograms of one ABP.
/// Gate ids are topologically sorted: children precede parents.
class Formula {
 public:
  Formula(std::shared_ptr<const Abp> abp, int tau, std::vector<Gate> gates, std::uint32_t root, bool shared);

  const Abp& abp() const noexcept { return *abp_; }
  const std::shared_ptr<const Abp>& abp_ptr() const noexcept { return abp_; }
  int nvars() const noexcept { return abp_->nvars(); }
  int tau() const noexcept { return tau_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const Gate& gate(std::uint32_t g) const { return gates_.at(g); }
  std::uint32_t root() const noexcept { return root_; }
  std::size_t size() const noexcept { return gates_.size(); }
  /// True when some gate may have several parents (DAG mode). Parse-tree
  /// enumeration needs a tree; the DP routines accept either.
  bool shared() const noexcept { return shared_; }

 private:
  std::shared_ptr<const Abp> abp_;
  int tau_;
  std::vector<Gate> gates_;
  std::uint32_t root_;
  bool shared_;
};

/// ceil(sqrt(n)).
int leaf_arity_bound(int nvars);

struct FormulaOptions {
  std::uint64_t max_gates = 10'000'000;
  /// Reuse the gate of an already-built identical subprogram (formula becomes a DAG).
  bool share_subformulas = false;
  /// Run check_formula_invariants after construction and throw InternalContradiction on failure.
  bool assert_invariants = true;
};

/// Recursive construction: subprograms on at most tau = ceil(sqrt(nvars))
/// variables become leaves; larger ones are split along their cut edges into
/// sum_i [from,tail_i] * label_i * [head_i,to]. A green cut whose two sides
/// together read fewer than sqrt(nvars) variables becomes one fused leaf.
/// Requires a syntactic multilinear program (normalization is not needed).
Formula abp_to_formula(const Abp& p, const FormulaOptions& options = {});
Formula abp_to_formula(std::shared_ptr<const Abp> p, const FormulaOptions& options = {});

/// Variables read by a leaf or const gate (structural, X of its subprograms).
Monomial leaf_vars(const Formula& f, std::uint32_t gate);
/// Polynomial of a leaf or const gate.
MultilinearPoly leaf_poly(const Formula& f, std::uint32_t gate);

/// Bottom-up evaluation. Throws MultilinearityError if a Times gate multiplies overlapping polynomials.
MultilinearPoly formula_poly(const Formula& f);

/// Bottom-up evaluation at a point; leaves are evaluated on the ABP directly.
Fe formula_eval(const Formula& f, std::span<const Fe> point);

/// Randomized identity test of the formula against its program (Schwartz-Zippel).
bool formula_matches_abp_randomized(const Formula& f, std::uint64_t seed, int trials = 20);

int formula_depth(const Formula& f);
/// 2 * log_{3/2}(n) + 2.
double formula_depth_bound(int nvars);

struct FormulaInvariants {
  bool times_disjoint = true;  // children of each Times gate read disjoint variable sets
  bool leaf_arity = true;      // every leaf reads at most tau variables
  bool depth_ok = true;
  int depth = 0;
  int max_leaf_arity = 0;
  bool ok() const { return times_disjoint && leaf_arity && depth_ok; }
};

FormulaInvariants check_formula_invariants(const Formula& f);

/// Expands shared gates so every gate has a single parent. Throws BudgetExceeded past max_gates.
Formula unshare(const Formula& f, std::uint64_t max_gates = 10'000'000);

// ---- parse trees ----

struct ParseTree {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> choices;  // (plus gate, chosen child position)
  std::vector<std::uint32_t> leaves;                             // Leaf and Const gates, left to right
};

/// Re-entrant cursor over all parse trees of a tree-shaped formula, in
/// lexicographic order of the preorder choice vector.
class ParseTreeCursor {
 public:
  /// Throws ValidationError if the formula is shared; call unshare first.
  explicit ParseTreeCursor(const Formula& f);
  const ParseTree& current() const noexcept { return current_; }
  /// Moves to the next parse tree; false when exhausted.
  bool next();

 private:
  void rebuild();

  const Formula* f_;
  std::vector<std::uint32_t> preorder_;
  std::vector<std::uint32_t> rank_;  // preorder position of each gate
  std::vector<std::uint32_t> choice_;
  ParseTree current_;
};

/// Saturating count of parse trees.
std::uint64_t count_parse_trees(const Formula& f);

/// Calls `visit` on every parse tree. Throws BudgetExceeded (progress = trees
/// visited) before visiting tree number cap + 1.
void enumerate_parse_trees(const Formula& f, std::uint64_t cap, const std::function<void(const ParseTree&)>& visit);

/// Product of the leaf polynomials of one parse tree.
MultilinearPoly parse_tree_value(const Formula& f, const ParseTree& t);

/// Exact max over parse trees of the summed per-leaf weight (DP: max at Plus, sum at Times).
std::int64_t max_over_parse_trees(const Formula& f, const std::function<std::int64_t(std::uint32_t leaf)>& weight);

struct LeafStats {
  std::int64_t max_leaves = 0;  // leaves reading at least one variable
  std::int64_t bound = 0;       // 3 * tau
  std::uint64_t parse_trees = 0;
  bool within_bound() const { return max_leaves <= bound; }
};

LeafStats parse_tree_leaf_stats(const Formula& f);

// ---- depth-4 form ----

struct Depth4Product {
  Fe coeff;                              // folded variable-free leaves
  std::vector<MultilinearPoly> factors;  // each on at most tau variables
  std::vector<Monomial> factor_vars;
};

struct Depth4Form {
  int nvars = 0;
  int tau = 0;
  PrimeField field;
  std::vector<Depth4Product> products;
};

/// One product per parse tree. Throws BudgetExceeded past `cap` parse trees.
Depth4Form flatten_depth4(const Formula& f, std::uint64_t cap = 1'000'000);
MultilinearPoly depth4_poly(const Depth4Form& d);
Fe depth4_eval(const Depth4Form& d, std::span<const Fe> point);

}  // namespace abpkit
