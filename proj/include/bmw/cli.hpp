#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bmw::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidInput = 2, kResourceLimit = 3 };

/// Runs one command line (without the program name). Machine output goes to
/// `out`, diagnostics and progress to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bmw::cli
