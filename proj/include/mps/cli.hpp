#ifndef MPS_CLI_HPP
#define MPS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mps::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_rejected = 1,     // the compiler rejected a program
    exit_sim_failure = 2,  // deadline miss, semantic mismatch or failed property
    exit_io = 3,           // unreadable input, malformed task set, bad usage
};

/// Runs `mpsc` with `args` (program name excluded) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mps::cli

#endif
