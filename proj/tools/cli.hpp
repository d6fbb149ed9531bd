#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stelnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitEstimation = 3;

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code: 0 success, 2 input/config error, 3 estimation/numeric error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stelnet::cli
