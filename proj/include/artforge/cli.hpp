#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace artforge {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 validation or verification failure, 2 usage error.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Entry point of the `artforge` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace artforge
