// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace carbonledger::cli {

/// Exit codes: 0 success, 1 I/O or internal failure, 2 usage or validation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Reports go to `out`, diagnostics
/// and usage text to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carbonledger::cli
