#include "abpkit/poly.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "abpkit/errors.hpp"
#include "abpkit/rng.hpp"

namespace abpkit {

Monomial monomial_of(std::initializer_list<int> vars) {
  return monomial_of(std::span<const int>(vars.begin(), vars.size()));
}

Monomial monomial_of(std::span<const int> vars) {
  Monomial m = 0;
  for (int i : vars) {
    if (i < 1 || i > kMaxVars) throw DimensionError("variable index out of range: " + std::to_string(i));
    if (m & var_bit(i)) throw MultilinearityError("repeated variable x" + std::to_string(i));
    m |= var_bit(i);
  }
  return m;
}

std::vector<int> vars_of(Monomial m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(degree(m)));
  while (m != 0) {
    out.push_back(__builtin_ctzll(m) + 1);
    m &= m - 1;
  }
  return out;
}

bool lex_less(Monomial a, Monomial b) {
  // Walk both index lists in increasing order; the first difference decides,
  // a proper prefix sorts first.
  while (a != 0 && b != 0) {
    int ia = __builtin_ctzll(a);
    int ib = __builtin_ctzll(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

MultilinearPoly::MultilinearPoly(int nvars, PrimeField field) : nvars_(nvars), field_(field) {
  if (nvars < 0 || nvars > kMaxVars) {
    throw DimensionError("nvars must lie in [0, 64], got " + std::to_string(nvars));
  }
}

MultilinearPoly MultilinearPoly::constant(int nvars, PrimeField field, Fe c) {
  MultilinearPoly p(nvars, field);
  if (c.v != 0) p.terms_.push_back({0, c});
  return p;
}

MultilinearPoly MultilinearPoly::variable(int nvars, PrimeField field, int i) {
  if (i < 1 || i > nvars) throw DimensionError("variable x" + std::to_string(i) + " outside nvars");
  MultilinearPoly p(nvars, field);
  p.terms_.push_back({var_bit(i), field.one()});
  return p;
}

MultilinearPoly MultilinearPoly::from_terms(int nvars, PrimeField field, std::vector<Term> terms) {
  MultilinearPoly p(nvars, field);
  const Monomial allowed = all_vars(nvars);
  for (const Term& t : terms) {
    if ((t.mono & ~allowed) != 0) throw DimensionError("monomial uses a variable beyond nvars");
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  for (const Term& t : terms) {
    Fe c = field.from_u64(t.coeff.v);
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff = field.add(p.terms_.back().coeff, c);
    } else {
      p.terms_.push_back({t.mono, c});
    }
  }
  std::erase_if(p.terms_, [](const Term& t) { return t.coeff.v == 0; });
  return p;
}

Fe MultilinearPoly::coeff(Monomial m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, Monomial key) { return t.mono < key; });
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return Fe{0};
}

Monomial MultilinearPoly::support() const noexcept {
  Monomial s = 0;
  for (const Term& t : terms_) s |= t.mono;
  return s;
}

bool operator==(const MultilinearPoly& a, const MultilinearPoly& b) { return poly_equal_exact(a, b); }

namespace {

void require_compatible(const MultilinearPoly& a, const MultilinearPoly& b) {
  if (a.nvars() != b.nvars()) {
    throw DimensionError("nvars mismatch: " + std::to_string(a.nvars()) + " vs " +
                         std::to_string(b.nvars()));
  }
  if (!(a.field() == b.field())) throw DimensionError("polynomials live in different fields");
}

MultilinearPoly merge(const MultilinearPoly& a, const MultilinearPoly& b, bool subtract) {
  require_compatible(a, b);
  const PrimeField& f = a.field();
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  auto push = [&](Monomial m, Fe c) {
    if (c.v != 0) out.push_back({m, c});
  };
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->mono < ib->mono)) {
      push(ia->mono, ia->coeff);
      ++ia;
    } else if (ia == a.terms().end() || ib->mono < ia->mono) {
      push(ib->mono, subtract ? f.neg(ib->coeff) : ib->coeff);
      ++ib;
    } else {
      push(ia->mono, subtract ? f.sub(ia->coeff, ib->coeff) : f.add(ia->coeff, ib->coeff));
      ++ia;
      ++ib;
    }
  }
  return MultilinearPoly::from_terms(a.nvars(), f, std::move(out));
}

}  // namespace

MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b) { return merge(a, b, false); }

MultilinearPoly poly_sub(const MultilinearPoly& a, const MultilinearPoly& b) { return merge(a, b, true); }

MultilinearPoly poly_scale(const MultilinearPoly& a, Fe c) {
  std::vector<Term> out;
  out.reserve(a.size());
  for (const Term& t : a.terms()) out.push_back({t.mono, a.field().mul(t.coeff, c)});
  return MultilinearPoly::from_terms(a.nvars(), a.field(), std::move(out));
}

MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b) {
  require_compatible(a, b);
  const PrimeField& f = a.field();
  if (a.size() == 1 && a.terms()[0].mono == 0) return poly_scale(b, a.terms()[0].coeff);
  if (b.size() == 1 && b.terms()[0].mono == 0) return poly_scale(a, b.terms()[0].coeff);
  std::unordered_map<Monomial, Fe> acc;
  acc.reserve(a.size() * b.size());
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) {
      if ((ta.mono & tb.mono) != 0) {
        throw MultilinearityError("product repeats variable x" +
                                  std::to_string(__builtin_ctzll(ta.mono & tb.mono) + 1));
      }
      Fe& slot = acc[ta.mono | tb.mono];
      slot = f.add(slot, f.mul(ta.coeff, tb.coeff));
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [m, c] : acc) out.push_back({m, c});
  return MultilinearPoly::from_terms(a.nvars(), f, std::move(out));
}

MultilinearPoly poly_mul_var(const MultilinearPoly& a, int i) {
  if (i < 1 || i > a.nvars()) throw DimensionError("variable x" + std::to_string(i) + " outside nvars");
  const Monomial bit = var_bit(i);
  std::vector<Term> out;
  out.reserve(a.size());
  for (const Term& t : a.terms()) {
    if (t.mono & bit) throw MultilinearityError("product repeats variable x" + std::to_string(i));
    out.push_back({t.mono | bit, t.coeff});
  }
  return MultilinearPoly::from_terms(a.nvars(), a.field(), std::move(out));
}

Fe poly_eval(const MultilinearPoly& f, std::span<const Fe> point) {
  if (static_cast<int>(point.size()) != f.nvars()) {
    throw DimensionError("evaluation point has " + std::to_string(point.size()) +
                         " coordinates, polynomial has " + std::to_string(f.nvars()) + " variables");
  }
  const PrimeField& F = f.field();
  Fe sum{0};
  for (const Term& t : f.terms()) {
    Fe prod = t.coeff;
    for (Monomial m = t.mono; m != 0; m &= m - 1) {
      prod = F.mul(prod, F.from_u64(point[static_cast<std::size_t>(__builtin_ctzll(m))].v));
    }
    sum = F.add(sum, prod);
  }
  return sum;
}

bool poly_equal_exact(const MultilinearPoly& a, const MultilinearPoly& b) {
  require_compatible(a, b);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.terms()[i].mono != b.terms()[i].mono || a.terms()[i].coeff != b.terms()[i].coeff) return false;
  }
  return true;
}

bool poly_equal_randomized(const MultilinearPoly& a, const MultilinearPoly& b, std::uint64_t seed,
                           int trials) {
  require_compatible(a, b);
  const PrimeField& F = a.field();
  Rng rng(seed);
  std::vector<Fe> point(static_cast<std::size_t>(a.nvars()));
  for (int t = 0; t < trials; ++t) {
    for (Fe& x : point) x = Fe{rng.below(F.prime())};
    if (poly_eval(a, point) != poly_eval(b, point)) return false;
  }
  return true;
}

bool poly_equal(const MultilinearPoly& a, const MultilinearPoly& b, const EqualityMode& mode) {
  if (mode.kind == EqualityMode::Kind::Exact) return poly_equal_exact(a, b);
  return poly_equal_randomized(a, b, mode.seed, mode.trials);
}

}  // namespace abpkit
