#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relspin::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,           // success, or the physics outcome the model predicts
  kContractViolation = 1, // physics-contract violation (vanishing state, unexpected verdict)
  kUsageError = 2,        // bad flags, malformed values, unwritable output
};

/// Runs the command line `args` (without the program name), writing reports to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relspin::cli
