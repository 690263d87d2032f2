#pragma once

#include <iosfwd>

namespace prepot {

/// Exit codes of the prepot command.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_invalid_input = 2,
    exit_no_convergence = 3,
    exit_grid_inadequate = 4,
};

/// Runs `prepot <command> ...`; argv[0] is the program name. Results go to
/// `out` (or the --output file), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace prepot
