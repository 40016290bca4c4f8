#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kubilius::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNumericFailure = 2,
  kVerificationMismatch = 3,
};

// Runs one command line (without the program name). Output goes to `out`
// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kubilius::cli
