#include "abpkit/io.hpp"

#include <algorithm>

#include "abpkit/errors.hpp"
#include "json.hpp"

namespace abpkit {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

// Wraps field access so type errors surface as ValidationError.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad ") + what + ": " + e.what());
  } catch (const DimensionError& e) {
    throw ValidationError(std::string("bad ") + what + ": " + e.what());
  }
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

PrimeField field_of(const json& j) {
  return PrimeField(j.contains("p") ? j.at("p").get<std::uint64_t>() : PrimeField::kDefaultPrime);
}

json poly_json(const MultilinearPoly& f) {
  std::vector<Term> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return lex_less(a.mono, b.mono); });
  json list = json::array();
  for (const Term& t : terms) list.push_back({{"vars", vars_of(t.mono)}, {"coeff", f.field().to_string(t.coeff)}});
  return {{"nvars", f.nvars()}, {"p", f.field().prime()}, {"terms", list}};
}

MultilinearPoly poly_of(const json& j) {
  return guarded("polynomial", [&] {
    const int n = j.at("nvars").get<int>();
    const PrimeField F = field_of(j);
    std::vector<Term> terms;
    for (const json& t : j.at("terms")) {
      const auto vars = t.at("vars").get<std::vector<int>>();
      terms.push_back(Term{monomial_of(std::span<const int>(vars)), F.parse(t.at("coeff").get<std::string>())});
    }
    return MultilinearPoly::from_terms(n, F, std::move(terms));
  });
}

json label_json(const Label& l, const PrimeField& F) {
  return l.is_var() ? json{{"var", l.var}} : json{{"const", F.to_string(l.value)}};
}

json abp_json(const Abp& p) {
  json edges = json::array();
  for (const Edge& e : p.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"label", label_json(e.label, p.field())}});
  }
  return {{"nvars", p.nvars()}, {"p", p.field().prime()}, {"layers", p.layers()}, {"edges", edges}};
}

Abp abp_of(const json& j) {
  return guarded("ABP", [&] {
    const PrimeField F = field_of(j);
    std::vector<Edge> edges;
    for (const json& e : j.at("edges")) {
      const json& l = e.at("label");
      Label label;
      if (l.contains("var")) {
        label = Label::Var(l.at("var").get<int>());
      } else if (l.contains("const")) {
        label = Label::Const(F.parse(l.at("const").get<std::string>()));
      } else {
        throw ValidationError("edge label needs \"var\" or \"const\"");
      }
      edges.push_back(Edge{e.at("from").get<NodeId>(), e.at("to").get<NodeId>(), label});
    }
    return Abp(j.at("nvars").get<int>(), F, j.at("layers").get<std::vector<std::vector<NodeId>>>(), std::move(edges));
  });
}

json segment_json(const Segment& s) {
  return {{"from", s.from}, {"to", s.to}, {"last_edge", s.last_edge ? json(*s.last_edge) : json(nullptr)}};
}

Segment segment_of(const json& j) {
  Segment s{j.at("from").get<NodeId>(), j.at("to").get<NodeId>(), std::nullopt};
  if (j.contains("last_edge") && !j.at("last_edge").is_null()) s.last_edge = j.at("last_edge").get<EdgeIndex>();
  return s;
}

json interval_json(const CircularInterval& i) {
  return {{"pi", i.pi.order()}, {"start", i.start}, {"len", i.len}, {"members", vars_of(i.members())}};
}

const char* kind_name(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::Plus:
      return "plus";
    case Gate::Kind::Times:
      return "times";
    case Gate::Kind::Leaf:
      return "leaf";
    case Gate::Kind::Const:
      return "const";
  }
  return "?";
}

}  // namespace

std::string poly_to_json(const MultilinearPoly& f, int indent) { return dump(poly_json(f), indent); }
MultilinearPoly poly_from_json(std::string_view text) { return poly_of(parse(text)); }

std::string abp_to_json(const Abp& p, int indent) { return dump(abp_json(p), indent); }
Abp abp_from_json(std::string_view text) { return abp_of(parse(text)); }

std::string permutation_to_json(const Permutation& pi) { return json(pi.order()).dump(); }
Permutation permutation_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded("permutation", [&] { return Permutation(j.get<std::vector<int>>()); });
}

std::string orders_to_json(const OrderList& orders, int indent) {
  json list = json::array();
  for (const Permutation& pi : orders) list.push_back(pi.order());
  return dump(list, indent);
}

OrderList orders_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded("order list", [&] {
    OrderList out;
    for (const json& o : j) out.emplace_back(o.get<std::vector<int>>());
    if (!out.empty()) validate_orders(out, out.front().size());
    return out;
  });
}

std::string formula_to_json(const Formula& f, int indent) {
  json gates = json::array();
  for (const Gate& g : f.gates()) {
    json o{{"kind", kind_name(g.kind)}};
    if (g.kind == Gate::Kind::Plus || g.kind == Gate::Kind::Times) o["children"] = g.children;
    if (g.kind == Gate::Kind::Leaf) {
      json segs = json::array();
      for (const Segment& s : g.segments) segs.push_back(segment_json(s));
      o["segments"] = segs;
    }
    if (g.kind == Gate::Kind::Const) o["value"] = f.abp().field().to_string(g.value);
    gates.push_back(o);
  }
  return dump({{"nvars", f.nvars()},
               {"tau", f.tau()},
               {"root", f.root()},
               {"shared", f.shared()},
               {"gates", gates},
               {"abp", abp_json(f.abp())}},
              indent);
}

Formula formula_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded("formula", [&] {
    auto abp = std::make_shared<const Abp>(abp_of(j.at("abp")));
    std::vector<Gate> gates;
    for (const json& o : j.at("gates")) {
      const std::string kind = o.at("kind").get<std::string>();
      Gate g{Gate::Kind::Const, {}, {}, {}};
      if (kind == "plus" || kind == "times") {
        g.kind = kind == "plus" ? Gate::Kind::Plus : Gate::Kind::Times;
        g.children = o.at("children").get<std::vector<std::uint32_t>>();
      } else if (kind == "leaf") {
        g.kind = Gate::Kind::Leaf;
        for (const json& s : o.at("segments")) g.segments.push_back(segment_of(s));
      } else if (kind == "const") {
        g.value = abp->field().parse(o.at("value").get<std::string>());
      } else {
        throw ValidationError("unknown gate kind " + kind);
      }
      gates.push_back(std::move(g));
    }
    return Formula(abp, j.at("tau").get<int>(), std::move(gates), j.at("root").get<std::uint32_t>(),
                   j.at("shared").get<bool>());
  });
}

std::string depth4_to_json(const Depth4Form& d, int indent) {
  json products = json::array();
  for (const Depth4Product& prod : d.products) {
    json factors = json::array();
    for (const MultilinearPoly& f : prod.factors) factors.push_back(poly_json(f));
    products.push_back({{"coeff", d.field.to_string(prod.coeff)}, {"factors", factors}});
  }
  return dump({{"nvars", d.nvars}, {"tau", d.tau}, {"p", d.field.prime()}, {"products", products}}, indent);
}

Depth4Form depth4_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded("depth-4 form", [&] {
    Depth4Form d{j.at("nvars").get<int>(), j.at("tau").get<int>(), field_of(j), {}};
    for (const json& prod : j.at("products")) {
      Depth4Product p{d.field.parse(prod.at("coeff").get<std::string>()), {}, {}};
      for (const json& f : prod.at("factors")) {
        p.factors.push_back(poly_of(f));
        p.factor_vars.push_back(p.factors.back().support());
      }
      d.products.push_back(std::move(p));
    }
    return d;
  });
}

std::string decomposition_to_json(const Decomposition& d, const DecompositionCheck& check, int indent) {
  auto edges = [&](const std::vector<CutEdge>& list) {
    json out = json::array();
    for (const CutEdge& c : list) {
      const Summand* s = nullptr;
      for (const Summand& x : d.summands) {
        if (x.edge == c.edge) s = &x;
      }
      json o{{"edge", c.edge}, {"counts", {c.x_from_tail, c.x_from_head, c.x_head_to}}};
      if (s) o["label"] = label_json(s->label, s->left.field());
      out.push_back(o);
    }
    return out;
  };
  return dump({{"segment", segment_json(d.cuts.seg)},
               {"n", d.cuts.n},
               {"red_blue", edges(d.cuts.red_blue)},
               {"green_blue", edges(d.cuts.green_blue)},
               {"checks",
                {{"sum_matches", check.sum_matches},
                 {"red_bounds", check.red_bounds},
                 {"green_bounds", check.green_bounds},
                 {"disjoint", check.disjoint}}},
               {"verified", check.ok()}},
              indent);
}

std::string partition_to_json(const Partition& phi) {
  json list = json::array();
  for (int v = 1; v <= phi.nvars(); ++v) {
    list.push_back({{"var", v}, {"side", phi.side(v) == Side::Y ? "y" : "z"}, {"slot", phi.slot(v)}});
  }
  return list.dump();
}

Partition partition_from_json(std::string_view text) {
  const json j = parse(text);
  return guarded("partition", [&] {
    std::vector<Side> side(j.size());
    std::vector<int> slot(j.size());
    std::vector<char> seen(j.size(), 0);
    for (const json& e : j) {
      const int v = e.at("var").get<int>();
      if (v < 1 || static_cast<std::size_t>(v) > j.size() || seen[static_cast<std::size_t>(v - 1)]) {
        throw ValidationError("partition variables must be 1..n, each once");
      }
      seen[static_cast<std::size_t>(v - 1)] = 1;
      const std::string s = e.at("side").get<std::string>();
      if (s != "y" && s != "z") throw ValidationError("partition side must be \"y\" or \"z\"");
      side[static_cast<std::size_t>(v - 1)] = s == "y" ? Side::Y : Side::Z;
      slot[static_cast<std::size_t>(v - 1)] = e.at("slot").get<int>();
    }
    return Partition(std::move(side), std::move(slot));
  });
}

std::string rank_report_to_json(const Partition& phi, int rank, int indent) {
  return dump({{"m", phi.m()}, {"partition", json::parse(partition_to_json(phi))}, {"rank", rank}}, indent);
}

std::string fullrank_to_json(const FullRankResult& r, int indent) {
  json j = poly_json(r.g);
  json w = json::array();
  for (const auto& [key, value] : r.w_used) {
    const auto [i, k, jj] = key;
    w.push_back({{"i", i}, {"k", k}, {"j", jj}, {"value", r.g.field().to_string(value)}});
  }
  j["w"] = w;
  return dump(j, indent);
}

std::string interval_to_json(const CircularInterval& i) { return interval_json(i).dump(); }

std::string interval_witness_to_json(const IntervalWitness& w, int indent) {
  return dump({{"triple", {w.u, w.a, w.v}},
               {"interval_ua", w.interval_ua ? interval_json(*w.interval_ua) : json(nullptr)},
               {"interval_av", w.interval_av ? interval_json(*w.interval_av) : json(nullptr)}},
              indent);
}

std::string path_to_json(const Abp& p, const Path& path) {
  json vars = json::array();
  for (EdgeIndex e : path) {
    if (p.edge(e).label.is_var()) vars.push_back(p.edge(e).label.var);
  }
  return json{{"edges", path}, {"vars", vars}}.dump();
}

std::string pass_mapping_to_json(const PassResult& r, int indent) {
  json copies = json::object();
  for (std::size_t u = 0; u < r.copies.size(); ++u) {
    json bands = json::array();
    for (const auto& c : r.copies[u]) bands.push_back(c ? json(*c) : json(nullptr));
    copies[std::to_string(u)] = bands;
  }
  std::vector<int> padding(r.padding.begin(), r.padding.end());
  return dump({{"copies", copies},
               {"padding", padding},
               {"band_first_layer", r.band_first_layer},
               {"copies_created", r.copies_created}},
              indent);
}

PassResult pass_from_json(std::string_view q_text, std::string_view mapping_text) {
  Abp q = abp_from_json(q_text);
  const json j = parse(mapping_text);
  return guarded("pass mapping", [&] {
    PassResult r{std::move(q), {}, {}, {}, j.at("copies_created").get<std::size_t>()};
    const json& copies = j.at("copies");
    r.copies.resize(copies.size());
    for (const auto& [key, bands] : copies.items()) {
      const std::size_t u = std::stoul(key);
      if (u >= r.copies.size()) throw ValidationError("copy mapping keys must be 0..N-1");
      for (const json& c : bands) {
        r.copies[u].push_back(c.is_null() ? std::nullopt : std::optional<NodeId>(c.get<NodeId>()));
      }
    }
    for (int x : j.at("padding").get<std::vector<int>>()) r.padding.push_back(static_cast<char>(x != 0));
    r.band_first_layer = j.at("band_first_layer").get<std::vector<int>>();
    if (r.padding.size() != r.q.num_nodes()) throw ValidationError("padding tags do not match Q");
    return r;
  });
}

}  // namespace abpkit
