#pragma once

// Acceptance suites 1-10: identity, oracle and property checks over the whole
// toolkit, each with a pass/fail verdict and wall-clock timing.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jlt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  unsigned threads = 1;
  std::uint64_t seed = 20240917;
  /// Path of the CLI executable; when set, criterion 10 also compares
  /// `ensemble` outputs produced by separate processes.
  std::string cli_path;
  /// Criteria to run; empty means all of 1..10.
  std::vector<int> only;
  /// Called as soon as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriterionCount = 10;
/// Budget for the whole suite, checked as part of criterion 10.
inline constexpr double kSuiteBudgetSeconds = 600.0;

/// Runs one criterion. Throws std::invalid_argument for an unknown id.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria in order. Criterion 10 additionally requires
/// the elapsed time of the whole run to stay within kSuiteBudgetSeconds.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One line: "PASS  3 spectrum-duality  12.345 s  detail".
std::string format_result(const CriterionResult& r);

}  // namespace jlt
