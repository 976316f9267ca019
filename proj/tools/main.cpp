// abpkit command-line tool: generators, transformations, checkers and rank
// experiments over JSON artifacts.
//
// Exit codes: 0 pass, 1 property failure (witness in the report), 2 budget
// exceeded, 3 input error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "abpkit/abp.hpp"
#include "abpkit/corpus.hpp"
#include "abpkit/decompose.hpp"
#include "abpkit/errors.hpp"
#include "abpkit/formula.hpp"
#include "abpkit/fullrank.hpp"
#include "abpkit/generate.hpp"
#include "abpkit/interval.hpp"
#include "abpkit/io.hpp"
#include "abpkit/ordered.hpp"
#include "abpkit/partition.hpp"

using nlohmann::json;
using namespace abpkit;

namespace {

enum Exit { kPass = 0, kFail = 1, kBudget = 2, kInput = 3 };

// Above this many variables semantic checks switch to random evaluation.
constexpr int kExactMaxVars = 20;

struct Config {
  std::uint64_t seed = 1;
  std::uint64_t prime = PrimeField::kDefaultPrime;
  std::uint64_t budget_gates = 10'000'000;
  std::uint64_t budget_trees = 1'000'000;
  std::uint64_t budget_paths = 1'000'000;
  std::string out = "-";
  std::string format = "json";

  json to_json() const {
    return {{"seed", seed}, {"p", prime}, {"budget_gates", budget_gates}, {"budget_trees", budget_trees},
            {"budget_paths", budget_paths}};
  }
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

void emit(const Config& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw InputError("cannot write " + cfg.out);
  out << text;
}

// Input files hold a bare ABP or an object with "abp" plus optional "orders" / "pi".
struct ProgramInput {
  json doc;
  std::optional<Abp> abp;
};

ProgramInput load_program(const std::string& path) {
  ProgramInput in{parse_json(read_file(path)), std::nullopt};
  const json& a = in.doc.contains("abp") ? in.doc.at("abp") : in.doc;
  in.abp = abp_from_json(a.dump());
  return in;
}

OrderList load_orders(const ProgramInput& in, const std::string& orders_path) {
  if (!orders_path.empty()) return orders_from_json(read_file(orders_path));
  if (in.doc.contains("orders")) return orders_from_json(in.doc.at("orders").dump());
  throw InputError("an order list is required (--orders or an \"orders\" field)");
}

std::optional<Permutation> load_permutation(const ProgramInput* in, const std::string& perm) {
  if (!perm.empty()) {
    if (perm.find('[') != std::string::npos || perm.find(',') != std::string::npos) {
      std::string text = perm;
      if (text.front() != '[') text = "[" + text + "]";
      return permutation_from_json(text);
    }
    return permutation_from_json(read_file(perm));
  }
  if (in && in->doc.contains("pi")) return permutation_from_json(in->doc.at("pi").dump());
  return std::nullopt;
}

json parse_artifact(const std::string& text) { return json::parse(text); }

// ---- gen ----

struct GenArgs {
  std::string kind;
  int n = 4;
  int nodes = 30;
  int layers = 0;
  int width = 3;
  int ordered = 0;
  bool normalize = false;
  std::string w_file;
};

int cmd_gen(const Config& cfg, const GenArgs& a) {
  const PrimeField F(cfg.prime);
  Rng rng(cfg.seed);
  json out;
  if (a.kind == "fullrank") {
    FullRankSpec spec{a.n, WRandom{cfg.seed}};
    if (!a.w_file.empty()) {
      WExplicit w;
      for (const json& e : parse_json(read_file(a.w_file))) {
        w.values[{e.at("i").get<int>(), e.at("k").get<int>(), e.at("j").get<int>()}] =
            F.parse(e.at("value").get<std::string>());
      }
      spec.w = std::move(w);
    }
    out = parse_artifact(fullrank_to_json(gen_fullrank(spec, F)));
  } else if (a.kind == "random-smabp") {
    const int layers = a.layers > 0 ? a.layers : std::max(2, a.n);
    if (a.n > kMaxVars || a.nodes > 100'000) throw BudgetExceeded("generator limits: n <= 64, nodes <= 100000");
    if (a.ordered > 0) {
      OrderedParams p{a.n, a.ordered, layers, a.width, a.nodes, 15};
      OrderedInstance inst = random_l_ordered(rng, p, F);
      Abp abp = a.normalize ? normalize(inst.abp) : inst.abp;
      out = {{"abp", parse_artifact(abp_to_json(abp))}, {"orders", parse_artifact(orders_to_json(inst.orders))}};
    } else {
      SmAbpParams p{a.n, layers, a.width, a.nodes, 35, 15};
      Abp abp = random_smabp(rng, p, F);
      if (a.normalize) abp = normalize(abp);
      out = parse_artifact(abp_to_json(abp));
    }
  } else if (a.kind == "circular") {
    if (a.n > kMaxVars) throw BudgetExceeded("generator limit: n <= 64");
    CircularInstance inst = random_rotated_roabp(rng, CircularParams{a.n, a.width, 35, 10}, F);
    Abp abp = a.normalize ? normalize(inst.abp) : inst.abp;
    out = {{"abp", parse_artifact(abp_to_json(abp))},
           {"pi", inst.pi.order()},
           {"rotation", inst.rotation}};
  } else {
    throw InputError("unknown generator " + a.kind);
  }
  emit(cfg, out);
  return kPass;
}

// ---- transform ----

json semantics(const char* mode, bool equal) { return {{"mode", mode}, {"equal", equal}}; }

int cmd_transform(const Config& cfg, const std::string& pass, const std::string& in_path,
                  const std::string& orders_path) {
  ProgramInput in = load_program(in_path);
  const Abp original = *in.abp;
  const bool was_normalized = is_normalized(original);
  const Abp p = was_normalized ? original : normalize(original);
  const bool exact = p.nvars() <= kExactMaxVars;
  json report{{"config", cfg.to_json()}, {"pass", pass}, {"normalized_input", !was_normalized}};
  FormulaOptions fopt;
  fopt.max_gates = cfg.budget_gates;
  bool ok = true;

  if (pass == "decompose") {
    if (!is_syntactic_multilinear(p).ok) throw MultilinearityError("input is not syntactic multilinear");
    const Decomposition d = decompose(p, p.source(), p.sink());
    const DecompositionCheck c = verify_decomposition(p, d, p.source(), p.sink());
    report["artifact"] = parse_artifact(decomposition_to_json(d, c));
    if (!was_normalized) report["program"] = parse_artifact(abp_to_json(p));
    ok = c.ok();
  } else if (pass == "to-formula" || pass == "to-depth4") {
    if (!is_syntactic_multilinear(p).ok) throw MultilinearityError("input is not syntactic multilinear");
    const Formula f = abp_to_formula(p, fopt);
    const FormulaInvariants inv = check_formula_invariants(f);
    const LeafStats leaves = parse_tree_leaf_stats(f);
    json r{{"gates", f.size()},
           {"depth", inv.depth},
           {"depth_bound", formula_depth_bound(f.nvars())},
           {"tau", f.tau()},
           {"max_leaf_arity", inv.max_leaf_arity},
           {"times_disjoint", inv.times_disjoint},
           {"max_parse_tree_leaves", leaves.max_leaves},
           {"leaf_bound", leaves.bound},
           {"parse_trees", leaves.parse_trees}};
    ok = inv.ok() && leaves.within_bound();
    if (pass == "to-formula") {
      const bool eq = exact ? poly_equal_exact(formula_poly(f), abp_poly(p))
                            : formula_matches_abp_randomized(f, cfg.seed);
      r["semantics"] = semantics(exact ? "exact" : "randomized", eq);
      report["artifact"] = parse_artifact(formula_to_json(f));
      ok = ok && eq;
    } else {
      const Depth4Form d = flatten_depth4(f, cfg.budget_trees);
      std::size_t max_factors = 0;
      int max_arity = 0;
      bool disjoint = true;
      for (const Depth4Product& prod : d.products) {
        max_factors = std::max(max_factors, prod.factors.size());
        Monomial seen = 0;
        for (Monomial m : prod.factor_vars) {
          max_arity = std::max(max_arity, degree(m));
          disjoint = disjoint && !(seen & m);
          seen |= m;
        }
      }
      bool eq;
      if (exact) {
        eq = poly_equal_exact(depth4_poly(d), abp_poly(p));
      } else {
        Rng rng(cfg.seed);
        std::vector<Fe> point(static_cast<std::size_t>(p.nvars()));
        eq = true;
        for (int t = 0; t < 20 && eq; ++t) {
          for (Fe& x : point) x = Fe{rng.below(p.field().prime())};
          eq = depth4_eval(d, point) == abp_eval(p, point);
        }
      }
      r["products"] = d.products.size();
      r["max_factors"] = max_factors;
      r["factor_bound"] = 3 * d.tau;
      r["max_factor_arity"] = max_arity;
      r["factors_disjoint"] = disjoint;
      r["semantics"] = semantics(exact ? "exact" : "randomized", eq);
      report["artifact"] = parse_artifact(depth4_to_json(d));
      ok = ok && eq && disjoint && max_factors <= static_cast<std::size_t>(3 * d.tau) && max_arity <= d.tau;
    }
    report["report"] = r;
  } else if (pass == "order-to-pass") {
    const OrderList orders = load_orders(in, orders_path);
    validate_orders(orders, p.nvars());
    const OrderCheck oc = check_ordered(p, orders, cfg.budget_paths);
    if (!oc.ok) {
      report["error"] = "order-violation";
      report["witness"] = parse_artifact(path_to_json(p, oc.witness));
      emit(cfg, report);
      return kFail;
    }
    const PassResult r = order_to_pass(p, orders);
    const Classification c = classify(r.q);
    const int L = static_cast<int>(orders.size());
    bool eq;
    if (exact) {
      eq = poly_equal_exact(abp_poly(r.q), abp_poly(p));
    } else {
      Rng rng(cfg.seed);
      std::vector<Fe> point(static_cast<std::size_t>(p.nvars()));
      eq = true;
      for (int t = 0; t < 20 && eq; ++t) {
        for (Fe& x : point) x = Fe{rng.below(p.field().prime())};
        eq = abp_eval(r.q, point) == abp_eval(p, point);
      }
    }
    const bool claim = exact ? verify_band_claim(p, r) : true;
    const bool purity = check_band_purity(r, orders);
    const bool sm = is_syntactic_multilinear(r.q).ok;
    const std::size_t bound = static_cast<std::size_t>(L) * p.num_nodes();
    report["artifact"] = {{"abp", parse_artifact(abp_to_json(r.q))},
                          {"mapping", parse_artifact(pass_mapping_to_json(r))}};
    report["report"] = {{"L", L},
                        {"l_pass", c.l_pass ? json(c.l_pass->count) : json(nullptr)},
                        {"non_padding_nodes", r.non_padding_nodes()},
                        {"size_bound", bound},
                        {"band_claim", exact ? json(claim) : json("skipped")},
                        {"band_purity", purity},
                        {"syntactic_multilinear", sm},
                        {"semantics", semantics(exact ? "exact" : "randomized", eq)}};
    ok = eq && claim && purity && sm && c.l_pass && c.l_pass->count <= L && r.non_padding_nodes() <= bound;
  } else {
    throw InputError("unknown pass " + pass);
  }
  report["ok"] = ok;
  emit(cfg, report);
  return ok ? kPass : kFail;
}

// ---- rank ----

int cmd_rank(const Config& cfg, const std::string& in_path, int samples, const std::string& partition_path,
             const std::string& perm) {
  const json doc = parse_json(read_file(in_path));
  MultilinearPoly f = doc.contains("layers") || doc.contains("abp")
                          ? abp_poly(abp_from_json((doc.contains("abp") ? doc.at("abp") : doc).dump()))
                          : poly_from_json(doc.dump());
  if (f.nvars() > 24) throw BudgetExceeded("rank limited to n <= 24");
  std::vector<Partition> phis;
  if (!partition_path.empty()) phis.push_back(partition_from_json(read_file(partition_path)));
  if (auto pi = load_permutation(nullptr, perm)) phis.push_back(partition_from_permutation(*pi));
  Rng rng(cfg.seed);
  for (int k = 0; k < samples; ++k) phis.push_back(sample_partition(f.nvars(), rng.next()));
  if (phis.empty()) throw InputError("no partitions requested");
  json results = json::array();
  std::map<int, int> histogram;
  int lo = 1 << 30, hi = -1;
  for (const Partition& phi : phis) {
    const int r = rank_phi(f, phi);
    results.push_back(parse_artifact(rank_report_to_json(phi, r)));
    ++histogram[r];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  json hist = json::object();
  for (const auto& [r, c] : histogram) hist[std::to_string(r)] = c;
  emit(cfg, {{"config", cfg.to_json()},
             {"n", f.nvars()},
             {"m", f.nvars() / 2},
             {"results", results},
             {"summary", {{"min", lo}, {"max", hi}, {"histogram", hist}, {"count", phis.size()}}}});
  return kPass;
}

// ---- check ----

int cmd_check(const Config& cfg, const std::string& kind, const std::string& in_path, const std::string& orders_path,
              const std::string& perm, int max_l) {
  ProgramInput in = load_program(in_path);
  const Abp& p = *in.abp;
  json report{{"config", cfg.to_json()}, {"check", kind}};
  bool ok = true;
  if (kind == "smabp") {
    const SmCheck c = is_syntactic_multilinear(p);
    ok = c.ok;
    if (!ok) report["witness"] = parse_artifact(path_to_json(p, c.witness));
  } else if (kind == "roabp" || kind == "l-pass") {
    const Classification c = classify(p);
    report["oblivious"] = c.oblivious;
    report["roabp"] = c.roabp;
    if (c.l_pass) report["l_pass"] = {{"count", c.l_pass->count}, {"cut_layers", c.l_pass->cut_layers}};
    if (kind == "roabp") {
      ok = c.roabp;
    } else {
      ok = c.l_pass && (max_l <= 0 || c.l_pass->count <= max_l);
    }
  } else if (kind == "ordered") {
    const OrderList orders = load_orders(in, orders_path);
    validate_orders(orders, p.nvars());
    const OrderCheck c = check_ordered(p, orders, cfg.budget_paths);
    ok = c.ok;
    if (!ok) report["witness"] = parse_artifact(path_to_json(p, c.witness));
  } else if (kind == "circular-interval") {
    std::optional<Permutation> pi = load_permutation(&in, perm);
    if (!pi) {
      pi = find_circular_interval_order(p);
      report["searched"] = true;
      if (!pi) {
        report["pass"] = false;
        emit(cfg, report);
        return kFail;
      }
    }
    report["pi"] = pi->order();
    const IntervalCheck c = check_strict_circular_interval(p, *pi);
    ok = c.ok;
    if (!ok && c.witness) report["witness"] = parse_artifact(interval_witness_to_json(*c.witness));
  } else {
    throw InputError("unknown check " + kind);
  }
  report["pass"] = ok;
  emit(cfg, report);
  return ok ? kPass : kFail;
}

// ---- corpus ----

int cmd_corpus(const Config& cfg, const std::vector<int>& only) {
  CorpusConfig cc;
  cc.seed = cfg.seed;
  cc.field = PrimeField(cfg.prime);
  cc.max_gates = cfg.budget_gates;
  cc.max_parse_trees = cfg.budget_trees;
  json rows = json::array();
  bool all = true;
  for (int id = 1; id <= kNumCriteria; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const CriterionResult r = run_criterion(id, cc);
    std::fprintf(stderr, "[%s] %d %s (%.2fs) %s\n", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                 r.detail.c_str());
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass()},
                    {"property_ok", r.property_ok},
                    {"time_limit", r.time_limit},
                    {"within_time_limit", r.time_limit <= 0 || r.seconds < r.time_limit},
                    {"detail", r.detail}});
    all = all && r.pass();
  }
  emit(cfg, {{"config", cfg.to_json()}, {"criteria", rows}, {"pass", all}});
  return all ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abpkit: syntactic multilinear algebraic branching programs"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--prime", cfg.prime, "Field characteristic")->capture_default_str();
  app.add_option("--budget-gates", cfg.budget_gates, "Formula gate cap")->capture_default_str();
  app.add_option("--budget-trees", cfg.budget_trees, "Parse-tree cap")->capture_default_str();
  app.add_option("--budget-paths", cfg.budget_paths, "Path enumeration cap")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file, - for stdout")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json"}))->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a polynomial or program");
  gen_cmd->add_option("kind", gen.kind, "fullrank | random-smabp | circular")
      ->required()
      ->check(CLI::IsMember({"fullrank", "random-smabp", "circular"}));
  gen_cmd->add_option("--n", gen.n, "Number of variables")->capture_default_str();
  gen_cmd->add_option("--nodes", gen.nodes, "Node budget")->capture_default_str();
  gen_cmd->add_option("--layers", gen.layers, "Sink layer index (default n)");
  gen_cmd->add_option("--width", gen.width, "Maximum layer width")->capture_default_str();
  gen_cmd->add_option("--ordered", gen.ordered, "Build an L-ordered program with this many orders");
  gen_cmd->add_flag("--normalize", gen.normalize, "Normalize the generated program");
  gen_cmd->add_option("--w", gen.w_file, "Explicit w values: [{i,k,j,value}]");

  std::string pass, in_path = "-", orders_path, perm, partition_path;
  auto* tr_cmd = app.add_subcommand("transform", "Apply a transformation and verify it");
  tr_cmd->add_option("pass", pass, "decompose | to-formula | to-depth4 | order-to-pass")
      ->required()
      ->check(CLI::IsMember({"decompose", "to-formula", "to-depth4", "order-to-pass"}));
  tr_cmd->add_option("--in", in_path, "Input program")->capture_default_str();
  tr_cmd->add_option("--orders", orders_path, "Order list file");

  int samples = 0;
  auto* rank_cmd = app.add_subcommand("rank", "Partial derivative matrix ranks");
  rank_cmd->add_option("--in", in_path, "Polynomial or program")->capture_default_str();
  rank_cmd->add_option("--samples", samples, "Random partitions to sample");
  rank_cmd->add_option("--partition", partition_path, "Explicit partition file");
  rank_cmd->add_option("--perm", perm, "Partition from a permutation: file or comma list");

  std::string check_kind;
  int max_l = 0;
  auto* check_cmd = app.add_subcommand("check", "Structural checks with witnesses");
  check_cmd->add_option("kind", check_kind, "smabp | roabp | l-pass | ordered | circular-interval")
      ->required()
      ->check(CLI::IsMember({"smabp", "roabp", "l-pass", "ordered", "circular-interval"}));
  check_cmd->add_option("--in", in_path, "Input program")->capture_default_str();
  check_cmd->add_option("--orders", orders_path, "Order list file (ordered)");
  check_cmd->add_option("--perm", perm, "Permutation file or comma list (circular-interval)");
  check_cmd->add_option("--max-l", max_l, "Largest acceptable pass count (l-pass)");

  std::vector<int> only;
  auto* corpus_cmd = app.add_subcommand("corpus", "Run the acceptance suite");
  corpus_cmd->add_option("--criterion", only, "Run only these criteria")->check(CLI::Range(1, kNumCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(cfg, gen);
    if (*tr_cmd) return cmd_transform(cfg, pass, in_path, orders_path);
    if (*rank_cmd) return cmd_rank(cfg, in_path, samples, partition_path, perm);
    if (*check_cmd) return cmd_check(cfg, check_kind, in_path, orders_path, perm, max_l);
    if (*corpus_cmd) return cmd_corpus(cfg, only);
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return kBudget;
  } catch (const OrderViolation& e) {
    std::fprintf(stderr, "order violation: %s\n", e.what());
    return kFail;
  } catch (const InternalContradiction& e) {
    std::fprintf(stderr, "internal contradiction: %s\n", e.what());
    return kFail;
  } catch (const Error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInput;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInput;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInput;
  }
  return kInput;
}
