#pragma once

#include <iosfwd>

namespace mixdet::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kBudget = 3,
  kBoundViolation = 4,
};

/// Entry point of the `mixdet` tool. Reports go to `out` (or the --out
/// file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixdet::cli
