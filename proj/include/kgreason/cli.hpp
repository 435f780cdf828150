#pragma once

#include <iosfwd>

namespace kgreason {

// Exit codes: 0 success, 1 usage, 2 data/load, 3 backend.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitBackend = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kgreason
