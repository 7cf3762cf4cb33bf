#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conic::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kMathRejection = 3, kInvariantFailure = 4 };

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace conic::cli
