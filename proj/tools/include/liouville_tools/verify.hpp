#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace liouville::tools {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::function<CriterionResult()> run;
};

/// The ten acceptance criteria, in order. Tolerances are fixed inside each check.
const std::vector<Criterion>& acceptance_criteria();

/// Runs the selected criteria (all when `ids` is empty) and writes one
/// "PASS"/"FAIL" line per criterion to `log`. Exceptions inside a criterion
/// count as failures.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream& log);

std::string format_line(const CriterionResult& r);

}  // namespace liouville::tools
