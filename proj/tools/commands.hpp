#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace boxspline::cli {

enum ExitCode : int { kSuccess = 0, kIoOrArgumentError = 1, kInfeasible = 2 };

/// Parses `args` (without the program name) and runs the selected subcommand.
/// Tables go to `out`; timing, reports and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boxspline::cli
