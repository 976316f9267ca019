#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "abpkit/field.hpp"

namespace abpkit {

/// Set of variable indices as a bitmask: bit (i-1) stands for x_i, 1 <= i <= 64.
using Monomial = std::uint64_t;

inline constexpr int kMaxVars = 64;

constexpr Monomial var_bit(int i) { return Monomial{1} << (i - 1); }
Monomial monomial_of(std::initializer_list<int> vars);
Monomial monomial_of(std::span<const int> vars);
/// Sorted 1-based variable indices of `m`.
std::vector<int> vars_of(Monomial m);
inline int degree(Monomial m) { return __builtin_popcountll(m); }
/// Mask of x_1..x_n.
constexpr Monomial all_vars(int n) { return n >= 64 ? ~Monomial{0} : (Monomial{1} << n) - 1; }
/// Lexicographic comparison of the sorted index lists (the canonical term order of the JSON format).
bool lex_less(Monomial a, Monomial b);

struct Term {
  Monomial mono;
  Fe coeff;
};

/// Sparse multilinear polynomial over F_p in `nvars` variables. Terms are kept
/// sorted by monomial mask with no zero coefficients.
class MultilinearPoly {
 public:
  MultilinearPoly(int nvars, PrimeField field);

  static MultilinearPoly constant(int nvars, PrimeField field, Fe c);
  static MultilinearPoly variable(int nvars, PrimeField field, int i);
  /// Sums duplicate monomials, drops zeros, validates variable range.
  static MultilinearPoly from_terms(int nvars, PrimeField field, std::vector<Term> terms);

  int nvars() const noexcept { return nvars_; }
  const PrimeField& field() const noexcept { return field_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  Fe coeff(Monomial m) const;
  Fe constant_term() const { return coeff(0); }
  /// Union of variables that occur with a nonzero coefficient.
  Monomial support() const noexcept;

  friend bool operator==(const MultilinearPoly& a, const MultilinearPoly& b);

 private:
  int nvars_;
  PrimeField field_;
  std::vector<Term> terms_;
};

/// Throws DimensionError on mismatched nvars or field.
MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly poly_sub(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly poly_scale(const MultilinearPoly& a, Fe c);
/// Throws MultilinearityError if any pair of monomials shares a variable.
MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b);
/// Multiplies by x_i; cheaper special case of poly_mul.
MultilinearPoly poly_mul_var(const MultilinearPoly& a, int i);
Fe poly_eval(const MultilinearPoly& f, std::span<const Fe> point);

bool poly_equal_exact(const MultilinearPoly& a, const MultilinearPoly& b);
/// Evaluates at `trials` uniformly random points; false is a proof of inequality.
bool poly_equal_randomized(const MultilinearPoly& a, const MultilinearPoly& b, std::uint64_t seed,
                           int trials = 20);

struct EqualityMode {
  enum class Kind { Exact, Randomized } kind = Kind::Exact;
  std::uint64_t seed = 0;
  int trials = 20;
};

bool poly_equal(const MultilinearPoly& a, const MultilinearPoly& b, const EqualityMode& mode = {});

inline MultilinearPoly operator+(const MultilinearPoly& a, const MultilinearPoly& b) {
  return poly_add(a, b);
}
inline MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
  return poly_mul(a, b);
}

}  // namespace abpkit
