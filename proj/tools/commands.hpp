#pragma once

#include <string>
#include <vector>

namespace qdiff::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumericFault = 3, kRejected = 4 };

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// "c", "-c", "0.5c" or a plain number, in natural units.
double parse_speed(const std::string& text);

}  // namespace qdiff::cli
