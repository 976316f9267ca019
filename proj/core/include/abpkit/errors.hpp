#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace abpkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes disagree (variable counts, vector lengths, odd n where even is needed).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A product would repeat a variable.
class MultilinearityError : public Error {
 public:
  using Error::Error;
};

/// Unknown node id or edge index.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed structure: invalid ABP layering, non-bijective permutation, bad JSON field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input has nothing to work on (e.g. decomposing a variable-free program).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A size guard tripped. `progress` carries how far the computation got
/// (parse trees emitted, paths enumerated, gates built), when meaningful.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t progress = 0)
      : Error(what), progress_(progress) {}
  std::uint64_t progress() const noexcept { return progress_; }

 private:
  std::uint64_t progress_;
};

/// The program is not ordered with respect to the supplied permutations.
class OrderViolation : public Error {
 public:
  using Error::Error;
};

/// A construction reached a state its preconditions should have excluded.
class InternalContradiction : public Error {
 public:
  using Error::Error;
};

}  // namespace abpkit
