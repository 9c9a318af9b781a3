#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fleetopt::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kIncomplete = 2 };

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fleetopt::cli
