#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hdcp::cli {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitReject = 2;

// Runs the command line `args` (without the program name). Results go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdcp::cli
