#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sbsa::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAborted = 2;

// Environment variable naming the directory for outputs when --out is absent.
inline constexpr const char* kOutputDirEnv = "SBSA_OUTPUT_DIR";

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sbsa::cli
