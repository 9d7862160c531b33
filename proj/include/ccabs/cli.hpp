#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccabs::cli {

// Exit codes shared by every subcommand.
inline constexpr int kPass = 0;       // checks passed / result produced
inline constexpr int kFail = 1;       // well-formed input, negative verdict
inline constexpr int kBadInput = 2;   // unreadable input, bad usage, capacity
inline constexpr int kExhausted = 3;  // enumeration ended without a result

// Runs one command given the argument list (without the program name) and
// returns the exit code. All regular output goes to `out`, diagnostics and
// usage errors to `err`. Identical invocations produce identical bytes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccabs::cli
