#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qqd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,          // usage or parse error
  kExitDomain = 2,         // domain, structure or capacity error
  kExitReproduction = 3,   // reproduce found a mismatch
  kExitBoundNotReached = 4 // search stopped before reaching the lower bound
};

/// Runs one command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "4,2,2", "2x7,4x7" and "2^7,4^7" are accepted.
std::vector<int> parse_levels(const std::string& text);

/// Fixed-point rendering with `decimals` places, ties to even.
std::string fixed(double value, int decimals = 6);

}  // namespace qqd::cli
