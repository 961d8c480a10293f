#ifndef PHASEFLOW_VERIFY_HPP
#define PHASEFLOW_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace phaseflow {

/// Quick runs the sub-minute subset; Full adds the sweep regression, the
/// characteristics cross-check, and the grid-convergence study.
enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values against their bounds
};

/// Run the built-in physics checks at the requested level. Runs are shared
/// between checks where configurations coincide. jobs <= 0 picks a thread
/// count from the hardware.
std::vector<CheckResult> run_verification(VerifyLevel level, int jobs = 0);

bool all_passed(const std::vector<CheckResult>& results);

/// One "PASS name: detail" / "FAIL name: detail" line per check.
void print_results(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace phaseflow

#endif
