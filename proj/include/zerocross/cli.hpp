#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zerocross::cli {

/// Parses and executes one command (argv without the program name).
/// Exit status: 0 success, 1 failed self-test tolerance, 2 argument errors,
/// 3 numeric-budget errors.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace zerocross::cli
