#pragma once

#include <iosfwd>

namespace fsep::cli {

/// Exit codes: 0 success, 1 usage or validation error, 2 numerical or test failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Entry point of the fsep tool. JSON-lines go to `out` unless --out is given.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fsep::cli
