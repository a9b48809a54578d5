#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace choquard {

/// Exit-code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitVerification = 3 };

/// Runs one command line (without the program name), e.g. {"solve", "--p", "2.1"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace choquard
