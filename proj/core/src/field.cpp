#include "abpkit/field.hpp"

#include <array>

#include "abpkit/errors.hpp"

namespace abpkit {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : kBases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (std::uint64_t{1} << 63) || !is_prime_u64(p)) {
    throw ValidationError("field modulus " + std::to_string(p) + " is not a prime below 2^63");
  }
}

Fe PrimeField::from_i64(std::int64_t x) const noexcept {
  if (x >= 0) return Fe{static_cast<std::uint64_t>(x) % p_};
  // -(x+1) avoids overflow at INT64_MIN.
  std::uint64_t mag = static_cast<std::uint64_t>(-(x + 1)) + 1;
  return neg(Fe{mag % p_});
}

Fe PrimeField::parse(std::string_view s) const {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ValidationError("empty field element literal");
  Fe acc{0};
  const Fe ten = from_u64(10);
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw ValidationError("invalid digit in field element literal '" + std::string(s) + "'");
    }
    acc = add(mul(acc, ten), from_u64(static_cast<std::uint64_t>(c - '0')));
  }
  return negative ? neg(acc) : acc;
}

std::string PrimeField::to_string(Fe a) const { return std::to_string(a.v); }

std::int64_t PrimeField::centered(Fe a) const noexcept {
  if (a.v <= p_ / 2) return static_cast<std::int64_t>(a.v);
  return -static_cast<std::int64_t>(p_ - a.v);
}

Fe PrimeField::pow(Fe a, std::uint64_t e) const noexcept { return Fe{powmod(a.v, e, p_)}; }

Fe PrimeField::inv(Fe a) const {
  if (a.v == 0) throw DimensionError("inverse of zero");
  return pow(a, p_ - 2);
}

}  // namespace abpkit
