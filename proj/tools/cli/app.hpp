#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agentrag::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMissingStore = 3;
inline constexpr int kExitProvider = 4;

/// Runs one command line (args[0] is the program name) against the given
/// streams and returns the exit code. Never throws.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace agentrag::cli
