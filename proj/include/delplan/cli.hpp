#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace delplan {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,  // decision false, no plan, no protocol
  kExitUsage = 2,     // usage, parse or validation error
  kExitBudget = 3,
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delplan
