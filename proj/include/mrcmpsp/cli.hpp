#pragma once

#include <ostream>

namespace mrcmpsp {

/// Exit codes of the command-line tool.
enum ExitCode { exit_ok = 0, exit_infeasible = 1, exit_usage = 2 };

/// Entry point of the `mrcmpsp` tool: solve, validate, inspect, bench and
/// generate subcommands. Output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mrcmpsp
