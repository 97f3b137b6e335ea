#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reconeval::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kParse = 2, kNumerical = 3, kIo = 4 };

/// Entry point of the `reconeval` tool. Messages go to `out`, diagnostics to
/// `err`; the return value is one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reconeval::cli
