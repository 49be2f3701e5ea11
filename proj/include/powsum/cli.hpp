#pragma once

#include <ostream>

namespace powsum {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitUnknown = 0,
  kExitUsage = 1,
  kExitSat = 10,
  kExitUnsat = 20,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powsum
