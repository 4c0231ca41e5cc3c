#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecode {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (without the program name). Commands read from `in`
// and write to `out` unless given files.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace treecode
