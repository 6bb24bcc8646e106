#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spadwm {

/// Exit codes of the `wm` tool.
enum ExitCode : int {
    kExitAuthentic = 0,
    kExitError = 1,
    kExitTampered = 2,
    kExitUnknownSource = 3,
};

/// Runs the `wm` command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spadwm
