#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyproj::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kIterationCap = 3,
    kSizeGuard = 4,
    kInternal = 1,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyproj::cli
