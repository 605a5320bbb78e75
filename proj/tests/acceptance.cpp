// Runs the acceptance criteria and prints one PASS/FAIL line each.
// Usage: acceptance [id ...]; exit status 0 only when every selected criterion passes.
#include "liouville_tools/verify.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  const auto results = liouville::tools::run_acceptance(ids, std::cout);
  bool ok = !results.empty();
  for (const auto& r : results) ok = ok && r.passed;
  return ok ? 0 : 1;
}
