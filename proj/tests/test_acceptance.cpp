#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <iostream>
#include <vector>

#include "phaseflow/verify.hpp"

using namespace phaseflow;

namespace {

// One full verification pass shared by every assertion below. The full
// level covers all nine checks; each gets its own PASS/FAIL line so a
// failure names the physics that broke, not just a line number.
const std::vector<CheckResult>& full_results() {
  static const std::vector<CheckResult> results = [] {
    auto r = run_verification(VerifyLevel::Full);
    print_results(std::cout, r);
    return r;
  }();
  return results;
}

}  // namespace

TEST_CASE("full verification covers all nine checks") {
  CHECK(full_results().size() == 9);
}

TEST_CASE("every physics check passes at its stated tolerance") {
  for (const CheckResult& r : full_results()) {
    CAPTURE(r.name);
    CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
  }
}
