#pragma once

#include <iosfwd>

namespace riddleforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;

// Entry point for the `riddleforge` tool. Results go to `out`, progress and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace riddleforge::cli
