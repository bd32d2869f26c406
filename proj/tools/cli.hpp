#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mobdual::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsage = 2 };

/// Runs one command line; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mobdual::cli
