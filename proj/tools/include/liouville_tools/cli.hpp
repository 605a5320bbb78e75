#pragma once

#include <iosfwd>

namespace liouville::tools {

enum ExitCode : int { kOk = 0, kAborted = 2, kUsage = 64, kModuleError = 65 };

/// Parses argv, dispatches one subcommand and returns the process exit code.
/// Results go to `out` (or to files under --out), diagnostics and structured
/// error reports to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace liouville::tools
