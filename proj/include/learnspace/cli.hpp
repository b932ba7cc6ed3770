#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace learnspace {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitParse = 2, kExitCapacity = 3 };

/// Runs one command line (args[0] is the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace learnspace
