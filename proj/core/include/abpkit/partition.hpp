#pragma once

#include <cstdint>
#include <vector>

#include "abpkit/abp.hpp"
#include "abpkit/poly.hpp"

namespace abpkit {

enum class Side : std::uint8_t { Y, Z };

/// Balanced injective map of x_1..x_n onto y_1..y_{n/2}, z_1..z_{n/2}.
class Partition {
 public:
  /// side[v-1] and slot[v-1] (1-based) for each variable. Throws
  /// DimensionError on odd n and ValidationError unless every slot of
  /// both sides is hit exactly once.
  Partition(std::vector<Side> side, std::vector<int> slot);

  int nvars() const noexcept { return static_cast<int>(side_.size()); }
  int m() const noexcept { return nvars() / 2; }
  Side side(int var) const { return side_.at(static_cast<std::size_t>(var - 1)); }
  int slot(int var) const { return slot_.at(static_cast<std::size_t>(var - 1)); }
  const std::vector<Side>& sides() const noexcept { return side_; }
  const std::vector<int>& slots() const noexcept { return slot_; }
  Monomial y_vars() const noexcept { return y_; }
  Monomial z_vars() const noexcept { return z_; }
  /// The relabelled monomial as (Y-mask, Z-mask) over slot bits.
  std::pair<std::uint32_t, std::uint32_t> split(Monomial mono) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.side_ == b.side_ && a.slot_ == b.slot_;
  }

 private:
  std::vector<Side> side_;
  std::vector<int> slot_;
  Monomial y_ = 0, z_ = 0;
};

/// Uniform over all balanced partitions (side choice and slot order), deterministic in seed.
Partition sample_partition(int nvars, std::uint64_t seed);
/// x_{pi(i)} -> y_i and x_{pi(n/2+i)} -> z_i, pi read as positions -> variables.
Partition partition_from_permutation(const Permutation& pi);

/// Dense 2^m x 2^m coefficient matrix; row = Y-slot mask, column = Z-slot mask.
struct PDMatrix {
  int m = 0;
  PrimeField field;
  std::vector<Fe> entries;  // row-major

  std::size_t dim() const noexcept { return std::size_t{1} << m; }
  Fe at(std::size_t row, std::size_t col) const { return entries.at(row * dim() + col); }
};

/// Throws DimensionError on mismatched n, BudgetExceeded when n > max_vars.
PDMatrix build_pdm(const MultilinearPoly& f, const Partition& phi, int max_vars = 24);

/// Rank over F_p (zero rows and columns dropped, then elimination).
int rank(const PDMatrix& m);
/// rank_phi(f) without materialising the dense matrix.
int rank_phi(const MultilinearPoly& f, const Partition& phi);
/// Rank over Q of the matrix of centred integer lifts of the coefficients
/// (fraction-free elimination, arbitrary precision). n <= 12.
int rank_rational(const MultilinearPoly& f, const Partition& phi);

enum class Chromatic : std::uint8_t { Monochromatic, Bichromatic };

/// Bichromatic iff S meets both sides; the empty set is monochromatic.
Chromatic chromatic_class(Monomial s, const Partition& phi);

}  // namespace abpkit
