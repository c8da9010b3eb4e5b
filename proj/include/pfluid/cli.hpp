#pragma once

#include <ostream>

namespace pfluid {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitSolver = 2,
  kExitProperty = 3,
};

/// Subcommands run | convergence | props | gronwall.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfluid
