// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cstdio>

#include "abpkit/corpus.hpp"

int main() {
  abpkit::CorpusConfig config;
  int failed = 0;
  abpkit::run_acceptance(config, [&](const abpkit::CriterionResult& r) {
    std::printf("criterion %d %s: %s (%.3fs, limit %s) %s\n", r.id, r.name.c_str(), r.pass() ? "PASS" : "FAIL",
                r.seconds, r.time_limit > 0 ? (std::to_string(static_cast<int>(r.time_limit)) + "s").c_str() : "none",
                r.detail.c_str());
    std::fflush(stdout);
    failed += r.pass() ? 0 : 1;
  });
  std::printf("%d of %d criteria passed\n", abpkit::kNumCriteria - failed, abpkit::kNumCriteria);
  return failed == 0 ? 0 : 1;
}
