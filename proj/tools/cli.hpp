#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNumericalFailure = 1,
  kUsageError = 2,
  kBudgetViolation = 3,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclap::cli
