#pragma once

#include <iosfwd>

namespace smoothavg {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_precondition = 2, exit_uncertified = 3, exit_verification = 4 };

/// Parses argv, runs one subcommand, writes the report.  Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smoothavg
