#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace abpkit {

__extension__ using uint128 = unsigned __int128;

/// Residue modulo the prime of the owning PrimeField. Always reduced.
struct Fe {
  std::uint64_t v = 0;

  friend constexpr auto operator<=>(const Fe&, const Fe&) = default;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Arithmetic in F_p for a prime p < 2^63.
class PrimeField {
 public:
  /// 2^62 - 57, the largest prime below 2^62.
  static constexpr std::uint64_t kDefaultPrime = 4611686018427387847ULL;

  /// Throws ValidationError unless p is a prime in [2, 2^63).
  explicit PrimeField(std::uint64_t p = kDefaultPrime);

  std::uint64_t prime() const noexcept { return p_; }

  Fe zero() const noexcept { return Fe{0}; }
  Fe one() const noexcept { return Fe{1}; }
  Fe from_u64(std::uint64_t x) const noexcept { return Fe{x % p_}; }
  Fe from_i64(std::int64_t x) const noexcept;
  /// Parses an optionally signed decimal integer and reduces it mod p.
  Fe parse(std::string_view decimal) const;
  std::string to_string(Fe a) const;
  /// Representative in (-p/2, p/2]; used to lift small coefficients back to Z.
  std::int64_t centered(Fe a) const noexcept;

  Fe add(Fe a, Fe b) const noexcept {
    std::uint64_t s = a.v + b.v;
    return Fe{s >= p_ ? s - p_ : s};
  }
  Fe sub(Fe a, Fe b) const noexcept { return Fe{a.v >= b.v ? a.v - b.v : a.v + p_ - b.v}; }
  Fe neg(Fe a) const noexcept { return Fe{a.v == 0 ? 0 : p_ - a.v}; }
  Fe mul(Fe a, Fe b) const noexcept {
    return Fe{static_cast<std::uint64_t>(static_cast<uint128>(a.v) * b.v % p_)};
  }
  Fe pow(Fe a, std::uint64_t e) const noexcept;
  /// Throws DimensionError on zero.
  Fe inv(Fe a) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

}  // namespace abpkit
