#pragma once

// Acceptance suite: ten end-to-end checks of the library against published
// constants and against oracles that share no code with it (a tanh-sinh
// rule, brute-force scans and finite differences).

#include <iosfwd>
#include <string>
#include <vector>

namespace pmc::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion id in [1, kCriterionCount]. Library exceptions count as a failure.
[[nodiscard]] CriterionResult run_criterion(int id);

/// Runs every criterion, writing each result line to out as soon as it is known.
std::vector<CriterionResult> run_all(std::ostream& out);

/// "PASS [ 1] name: detail (0.012 s)".
[[nodiscard]] std::string format_line(const CriterionResult& result);

}  // namespace pmc::acceptance
