#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdt {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_unsound = 1, // also: translation could not be normalized
    exit_unknown = 2, // inconclusive or ill-formed families, no Unsound one
    exit_error = 3,   // bad input, module error
};

/// Runs the tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tdt
