#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace calcert {

/// Process exit codes.
enum ExitCode : int {
    kExitEntangled = 0,
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitInconclusive = 10,
    kExitSeparableModel = 11,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace calcert
