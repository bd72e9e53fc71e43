#pragma once

#include <string>
#include <vector>

namespace kshift {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Cross-module invariant suite: every check is independent and reports one
// pass/fail line. `horizon` scales the heavier checks.
std::vector<CheckResult> run_verification_suite(long horizon = 20000, int threads = 1);

}  // namespace kshift
