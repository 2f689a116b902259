#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tjp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal; integral values keep a trailing ".0".
std::string format_number(double v);

}  // namespace tjp
