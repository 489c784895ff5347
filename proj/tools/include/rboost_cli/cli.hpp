#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rboost::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rboost::cli
