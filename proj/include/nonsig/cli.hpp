#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nonsig {

/// Exit codes: 0 success, 1 domain failure (validation, infeasibility, failed
/// derivation), 2 input error (bad arguments, unreadable or malformed files).
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nonsig
