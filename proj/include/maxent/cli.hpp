#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace maxent {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

/// Runs the `maxent` command line. JSON results go to `out` (or the file
/// named by --output), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxent
