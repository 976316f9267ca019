#include "abpkit/corpus.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "abpkit/abp.hpp"
#include "abpkit/decompose.hpp"
#include "abpkit/errors.hpp"
#include "abpkit/formula.hpp"
#include "abpkit/fullrank.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/interval.hpp"
#include "abpkit/ordered.hpp"
#include "abpkit/partition.hpp"
#include "abpkit/paths.hpp"

namespace abpkit {

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string why) { return Outcome{false, std::move(why)}; }

// Normalized smABP with at most `max_nodes` nodes and at least one variable.
Abp normalized_smabp(Rng& rng, int n_lo, int n_hi, int max_nodes, const PrimeField& field) {
  for (;;) {
    SmAbpParams params;
    params.nvars = rng.between(n_lo, n_hi);
    params.layers = rng.between(std::max(2, params.nvars / 2), params.nvars + 2);
    params.max_width = rng.between(2, 5);
    params.max_nodes = rng.between(std::min(params.layers + 1, max_nodes), max_nodes);
    params.extra_edge_percent = rng.between(10, 45);
    params.const_percent = rng.between(0, 25);
    Abp p = normalize(random_smabp(rng, params, field));
    if (static_cast<int>(p.num_nodes()) <= max_nodes && subprogram_vars(p, p.source(), p.sink()) != 0) return p;
  }
}

OrderedInstance normalized_ordered(Rng& rng, const PrimeField& field) {
  for (;;) {
    OrderedParams params;
    params.num_orders = rng.between(1, 4);
    params.nvars = rng.between(3, 10);
    params.layers = rng.between(3, params.nvars + 1);
    params.max_width = rng.between(1, 3);
    params.max_nodes = rng.between(params.layers * params.num_orders, 40);
    params.const_percent = rng.between(0, 20);
    OrderedInstance inst = random_l_ordered(rng, params, field);
    Abp p = normalize(inst.abp);
    if (subprogram_vars(p, p.source(), p.sink()) == 0) continue;
    return OrderedInstance{std::move(p), std::move(inst.orders)};
  }
}

std::string str(std::ostringstream& os) { return os.str(); }

Outcome fullrank_reproduction(const CorpusConfig& cfg, Rng& rng) {
  std::ostringstream os;
  for (int n : {2, 4, 6, 8, 12}) {
    const FullRankCheck c = fullrank_rank_check(n, 50, rng.next(), 10, cfg.field);
    if (!c.ok) {
      os << "n=" << n << ": rank below " << c.expected << " after " << c.attempts << " attempts";
      return fail(str(os));
    }
    os << "n=" << n << " rank " << c.expected << " x" << c.ranks.size();
    if (c.attempts > 1) os << " (reseeded)";
    os << "; ";
  }
  return Outcome{true, str(os)};
}

Outcome decomposition_soundness(const CorpusConfig& cfg, Rng& rng) {
  std::size_t cuts = 0;
  for (int k = 0; k < 200; ++k) {
    const Abp p = normalized_smabp(rng, 3, 12, 60, cfg.field);
    const Decomposition d = decompose(p, p.source(), p.sink());
    const DecompositionCheck c = verify_decomposition(p, d, p.source(), p.sink());
    if (!c.ok()) {
      std::ostringstream os;
      os << "instance " << k << ": sum=" << c.sum_matches << " red=" << c.red_bounds << " green=" << c.green_bounds
         << " disjoint=" << c.disjoint;
      return fail(str(os));
    }
    cuts += d.cuts.red_blue.size() + d.cuts.green_blue.size();
  }
  return Outcome{true, "200 instances, " + std::to_string(cuts) + " cut edges within bounds"};
}

Outcome formula_construction(const CorpusConfig& cfg, Rng& rng) {
  std::int64_t worst = 0, worst_bound = 0;
  std::size_t gates = 0;
  int max_depth = 0;
  for (int k = 0; k < 100; ++k) {
    const Abp p = normalized_smabp(rng, 4, 16, 120, cfg.field);
    FormulaOptions opt;
    opt.max_gates = cfg.max_gates;
    const Formula f = abp_to_formula(p, opt);
    const FormulaInvariants inv = check_formula_invariants(f);
    const LeafStats s = parse_tree_leaf_stats(f);
    std::ostringstream os;
    os << "instance " << k << " (n=" << p.nvars() << "): ";
    if (!poly_equal_exact(formula_poly(f), abp_poly(p))) return fail(str(os) + "formula differs from the program");
    if (!inv.leaf_arity) return fail(str(os) + "leaf reads " + std::to_string(inv.max_leaf_arity) + " variables");
    if (!s.within_bound()) {
      return fail(str(os) + std::to_string(s.max_leaves) + " leaves in a parse tree, bound " + std::to_string(s.bound));
    }
    if (s.max_leaves * worst_bound >= worst * s.bound) {
      worst = s.max_leaves;
      worst_bound = s.bound;
    }
    gates += f.size();
    max_depth = std::max(max_depth, inv.depth);
  }
  return Outcome{true, "100 instances, " + std::to_string(gates) + " gates, max depth " + std::to_string(max_depth) +
                           ", tightest parse tree " + std::to_string(worst) + "/" + std::to_string(worst_bound) +
                           " leaves"};
}

Outcome depth4_reduction(const CorpusConfig& cfg, Rng& rng) {
  std::size_t products = 0;
  int done = 0, skipped = 0;
  while (done < 50) {
    const Abp p = normalized_smabp(rng, 3, 12, 90, cfg.field);
    FormulaOptions opt;
    opt.max_gates = cfg.max_gates;
    const Formula f = abp_to_formula(p, opt);
    if (count_parse_trees(f) > cfg.max_parse_trees) {  // outside the enumeration budget
      ++skipped;
      continue;
    }
    const Depth4Form d = flatten_depth4(f, cfg.max_parse_trees);
    std::ostringstream os;
    os << "instance " << done << " (n=" << p.nvars() << "): ";
    if (!poly_equal_exact(depth4_poly(d), abp_poly(p))) return fail(str(os) + "depth-4 form differs");
    for (const Depth4Product& prod : d.products) {
      if (static_cast<int>(prod.factors.size()) > 3 * d.tau) return fail(str(os) + "too many factors");
      Monomial seen = 0;
      for (Monomial m : prod.factor_vars) {
        if (degree(m) > d.tau) return fail(str(os) + "factor arity above tau");
        if (seen & m) return fail(str(os) + "factors share a variable");
        seen |= m;
      }
    }
    products += d.products.size();
    ++done;
  }
  return Outcome{true, "50 instances, " + std::to_string(products) + " products, " + std::to_string(skipped) +
                           " skipped over the parse-tree cap"};
}

Outcome order_to_pass_check(const CorpusConfig& cfg, Rng& rng) {
  std::size_t q_nodes = 0;
  for (int k = 0; k < 100; ++k) {
    const OrderedInstance inst = normalized_ordered(rng, cfg.field);
    const Abp& p = inst.abp;
    const int L = static_cast<int>(inst.orders.size());
    const PassResult r = order_to_pass(p, inst.orders);
    const Classification c = classify(r.q);
    std::ostringstream os;
    os << "instance " << k << " (n=" << p.nvars() << ", L=" << L << "): ";
    if (!poly_equal_exact(abp_poly(r.q), abp_poly(p))) return fail(str(os) + "Q differs from P");
    if (!c.l_pass || c.l_pass->count > L) return fail(str(os) + "Q is not L-pass");
    if (r.non_padding_nodes() > static_cast<std::size_t>(L) * p.num_nodes()) return fail(str(os) + "too many copies");
    if (!verify_band_claim(p, r)) return fail(str(os) + "band identity fails");
    if (!check_band_purity(r, inst.orders)) return fail(str(os) + "band reads out of order");
    if (!is_syntactic_multilinear(r.q).ok) return fail(str(os) + "Q not syntactic multilinear");
    q_nodes += r.q.num_nodes();
  }
  return Outcome{true, "100 instances, " + std::to_string(q_nodes) + " nodes in Q"};
}

Outcome roabp_census(const CorpusConfig& cfg, Rng& rng) {
  std::int64_t cyclic = 0;
  std::int64_t counted = 0;
  for (int k = 0; k < 100; ++k) {
    const OrderedInstance inst = normalized_ordered(rng, cfg.field);
    FormulaOptions opt;
    opt.max_gates = cfg.max_gates;
    const RoabpCensus c = roabp_leaf_census(inst.abp, inst.orders, opt);
    if (!c.ok()) {
      return fail("instance " + std::to_string(k) + ": " + std::to_string(c.non_roabp_leaves) +
                  " non-ROABP leaves, bound " + std::to_string(c.bound));
    }
    cyclic = std::max(cyclic, c.cyclic_leaves);
    counted = std::max(counted, c.non_roabp_leaves);
  }
  return Outcome{true, "100 instances, max non-ROABP leaves " + std::to_string(counted) +
                           ", max leaves needing two orders " + std::to_string(cyclic)};
}

Outcome bichromatic_bound(const CorpusConfig& cfg, Rng& rng) {
  int accepted = 0, rejected = 0;
  std::int64_t worst = 0;
  while (accepted < 60) {
    CircularParams params;
    params.nvars = 2 * rng.between(2, 6);
    params.max_width = rng.between(1, 3);
    params.const_percent = rng.between(0, 15);
    const CircularInstance inst = random_rotated_roabp(rng, params, cfg.field);
    const Abp p = normalize(inst.abp);
    if (subprogram_vars(p, p.source(), p.sink()) == 0 || !check_strict_circular_interval(p, inst.pi).ok) {
      ++rejected;
      continue;
    }
    FormulaOptions opt;
    opt.max_gates = cfg.max_gates;
    const BichromaticCensus c = bichromatic_census(p, inst.pi, opt);
    if (!c.ok()) {
      return fail("instance " + std::to_string(accepted) + ": " + std::to_string(c.max_bichromatic) +
                  " bichromatic leaves");
    }
    worst = std::max(worst, c.max_bichromatic);
    ++accepted;
  }
  return Outcome{true, "60 instances (" + std::to_string(rejected) + " rejected by the checker), max bichromatic " +
                           std::to_string(worst)};
}

Outcome rank_properties(const CorpusConfig& cfg, Rng& rng) {
  const PrimeField& F = cfg.field;
  for (int k = 0; k < 500; ++k) {
    const int n = 2 * rng.between(1, 5);
    const Partition phi = sample_partition(n, rng.next());
    const Monomial all = all_vars(n);
    // (1) subadditivity
    const MultilinearPoly f = random_poly(rng, n, all, rng.between(1, 12), 3, F);
    const MultilinearPoly g = random_poly(rng, n, all, rng.between(1, 12), 3, F);
    if (rank_phi(poly_add(f, g), phi) > rank_phi(f, phi) + rank_phi(g, phi)) {
      return fail("subadditivity fails on pair " + std::to_string(k));
    }
    // (2) multiplicativity on disjoint supports
    Monomial s = 0;
    for (int v = 1; v <= n; ++v) {
      if (rng.chance(1, 2)) s |= var_bit(v);
    }
    const MultilinearPoly a = random_poly(rng, n, s, rng.between(1, 10), 3, F);
    const MultilinearPoly b = random_poly(rng, n, all & ~s, rng.between(1, 10), 3, F);
    if (rank_phi(poly_mul(a, b), phi) != rank_phi(a, phi) * rank_phi(b, phi)) {
      return fail("multiplicativity fails on pair " + std::to_string(k));
    }
    // (3) support bound
    Monomial y1 = 0, z1 = 0;
    for (int v = 1; v <= n; ++v) {
      if (!rng.chance(2, 3)) continue;
      (phi.side(v) == Side::Y ? y1 : z1) |= var_bit(v);
    }
    const MultilinearPoly h = random_poly(rng, n, y1 | z1, rng.between(1, 16), 3, F);
    if (rank_phi(h, phi) > (1 << std::min(degree(y1), degree(z1)))) {
      return fail("support bound fails on pair " + std::to_string(k));
    }
  }
  return Outcome{true, "500 triples of checks"};
}

Outcome oracle_equivalence(const CorpusConfig& cfg, Rng& rng) {
  for (int k = 0; k < 200; ++k) {
    SmAbpParams params;
    params.nvars = rng.between(1, 12);
    params.layers = rng.between(1, 10);
    params.max_width = rng.between(1, 4);
    params.max_nodes = rng.between(params.layers + 1, 40);
    params.const_percent = rng.between(0, 30);
    const Abp p = random_smabp(rng, params, cfg.field);
    const Segment whole{p.source(), p.sink(), std::nullopt};
    if (!poly_equal_exact(abp_poly(p), path_sum_poly(p, whole))) {
      return fail("instance " + std::to_string(k) + ": DP and path enumeration differ");
    }
  }
  return Outcome{true, "200 instances"};
}

struct CriterionDef {
  const char* name;
  double limit;
  Outcome (*run)(const CorpusConfig&, Rng&);
};

const CriterionDef kCriteria[kNumCriteria] = {
    {"full-rank reproduction", 60, fullrank_reproduction},
    {"decomposition soundness", 30, decomposition_soundness},
    {"formula construction", 60, formula_construction},
    {"depth-4 reduction", 60, depth4_reduction},
    {"order-to-pass", 60, order_to_pass_check},
    {"ROABP leaf census", 0, roabp_census},
    {"bichromatic bound", 60, bichromatic_bound},
    {"rank property suite", 30, rank_properties},
    {"oracle equivalence", 0, oracle_equivalence},
};

}  // namespace

CriterionResult run_criterion(int id, const CorpusConfig& config) {
  if (id < 1 || id > kNumCriteria) throw ValidationError("criteria are numbered 1.." + std::to_string(kNumCriteria));
  const CriterionDef& def = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = def.name;
  r.time_limit = def.limit;
  Rng rng(config.seed ^ (0x51ed27a3c9b1f6d5ULL * static_cast<std::uint64_t>(id)));
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = def.run(config, rng);
    r.property_ok = o.ok;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.property_ok = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const CorpusConfig& config,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kNumCriteria; ++id) {
    out.push_back(run_criterion(id, config));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace abpkit
