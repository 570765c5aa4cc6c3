#pragma once

// Command-line front end. Exit codes: 0 ok, 1 invariant violation, 2 I/O
// error, 3 invalid configuration.

#include <iosfwd>
#include <string>
#include <vector>

namespace mol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitConfig = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mol::cli
