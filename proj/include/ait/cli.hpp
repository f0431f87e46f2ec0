#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ait {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the `ait` command line (args excludes the program name).
/// Exit codes: 0 success, 1 invalid input, 2 computation failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ait
