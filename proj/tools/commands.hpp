#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace optosqueeze::cli {

/// Runs the command line and returns the process exit code:
/// 0 success, 2 validation, 3 instability, 4 non-convergence, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optosqueeze::cli
