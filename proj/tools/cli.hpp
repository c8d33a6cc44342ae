#pragma once

#include <string>
#include <vector>

namespace fdkp::cli {

enum ExitCode : int { ok = 0, checkFailed = 1, invalidConfig = 2, solverFailure = 3 };

// Entry point behind the fdkp binary; args exclude the program name.
int run_command(const std::vector<std::string>& args);

} // namespace fdkp::cli
