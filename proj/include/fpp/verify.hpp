#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fpp {

// One measured quantity inside a criterion; `passed` means the comparison the
// check encodes (usually statistic <= threshold) held.
struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  double wall_seconds = 0.0;

  bool all_passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20260823;
  std::uint32_t workers = 0;  // 0 = hardware concurrency
  // Divides replicate counts (floor 100) for a fast plumbing run; the
  // statistical thresholds are unchanged, so only scale = 1 is authoritative.
  std::uint32_t scale = 1;
};

// Runs the full acceptance suite: twelve criteria mixing exact identities,
// brute-force oracle equivalences, and fixed-threshold distributional
// comparisons. One log line per criterion. Heavy intermediates (all-pairs
// distance runs, the limit-variable sample pools) are shared across criteria.
VerifyReport run_acceptance(const VerifyOptions& options, std::ostream& log);

}  // namespace fpp
