#pragma once

#include <iosfwd>

namespace momentdet {

/// Exit codes: 0 analysis produced Determinate/Indeterminate (or the command
/// succeeded), 2 Inconclusive, 10 invalid input, 11 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInvalidInput = 10;
inline constexpr int kExitComputeError = 11;

/// Entry point shared by the momentdet binary and the in-process CLI tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace momentdet
