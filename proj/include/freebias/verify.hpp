#pragma once

#include <string>
#include <vector>

namespace freebias::verify {

/// Outcome of one acceptance check. `measured` is compared against `required` (an upper bound
/// unless the detail says otherwise).
struct CheckResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double required = 0.0;
  bool passed = false;
  std::string detail;
};

/// Runs acceptance criterion `id` (1..17).
CheckResult run_criterion(int id);

/// Suite names accepted by run_suite, in display order.
const std::vector<std::string>& suite_names();

/// Criterion ids making up a suite; unknown names throw ParseError.
std::vector<int> suite_criteria(const std::string& suite);

std::vector<CheckResult> run_suite(const std::string& suite);

/// "[PASS] 7 azadi_tower: measured 1.2e-04 < 1.0e-03 (detail)".
std::string format_line(const CheckResult& r);

}  // namespace freebias::verify
