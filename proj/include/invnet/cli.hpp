#pragma once

#include <iosfwd>

namespace invnet {

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,    // bad arguments, malformed or inconsistent data
    kExitNumeric = 3,  // degenerate numerics (zero variance, zero normal)
    kExitIo = 4,
};

// Entry point of the `invnet` tool. Subcommands: simulate, train, explain,
// select, regress, plot-boundary, ingest, eval.
int run_cli(int argc, char** argv);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invnet
