#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cfn {

/// One checked claim of the verification suite.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;  // first failure, or a short success summary
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass() const;
};

/// Run the verification suite.  The fast level shrinks sampling budgets and
/// skips the largest instances; the full level runs every claim at its stated
/// budget.  Progress lines go to `progress` when given (one per criterion).
AcceptanceReport run_acceptance(bool full, std::uint64_t seed,
                                std::ostream* progress = nullptr);

}  // namespace cfn
