#pragma once

#include <string>
#include <vector>

#include "ciphase/types.hpp"

namespace ciphase {

// One acceptance check: a golden claim re-derived numerically and held to a
// fixed bound. worst is the largest deviation actually observed.
struct CheckResult {
  int criterion = 0;  // 1..10, groups related checks
  std::string name;
  bool pass = false;
  Real worst = 0.0;
  Real bound = 0.0;
  std::string detail;
};

// The full golden-value battery: quartic census and loop phases, planar
// example signs, both flux tables, Stokes consistency, monopole cap phases,
// dynamics against the exact solution, elliptic limits, and the property
// suites. Pure computation, ~seconds; throws nothing (a check that throws
// is reported as its own failure).
std::vector<CheckResult> run_acceptance();

// "[PASS] C4 ..." lines, one per check, deterministic formatting.
std::string render_report(const std::vector<CheckResult>& checks);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace ciphase
