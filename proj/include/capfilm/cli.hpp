#pragma once

namespace capfilm::cli {

// solve, sweep, verify, and render subcommands.  Returns the process exit
// code: 0 on success, 2 when a solve stops at the iteration cap, 1 on error.
int run(int argc, const char* const* argv);

}  // namespace capfilm::cli
