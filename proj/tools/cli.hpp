#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causal::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;

/// Runs one command line; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal::cli
