#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace radarloc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInfeasible = 3,
  kIoError = 4,
};

/// Runs one subcommand. `args` excludes the program name. Summary tables go
/// to `out`; a single `error: <Kind>: <message>` line goes to `err` on failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radarloc::cli
