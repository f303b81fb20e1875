#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rngaudit {

inline constexpr int kExitPass = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Runs one command line (arguments after the program name) and returns the
// exit code. Human-readable output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rngaudit
