#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "abpkit/field.hpp"

namespace abpkit {

struct CorpusConfig {
  std::uint64_t seed = 20240601;
  PrimeField field{};
  std::uint64_t max_gates = 10'000'000;
  std::uint64_t max_parse_trees = 1'000'000;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool property_ok = false;
  double seconds = 0;
  double time_limit = 0;  // 0: untimed
  std::string detail;     // counts, or the first failure
  bool pass() const { return property_ok && (time_limit <= 0 || seconds < time_limit); }
};

constexpr int kNumCriteria = 9;

/// Runs one acceptance criterion (1..9) on its seeded corpus. Errors thrown by
/// the library are caught and reported as failures.
CriterionResult run_criterion(int id, const CorpusConfig& config);

/// All criteria in order; `on_result` sees each as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const CorpusConfig& config,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace abpkit
