#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treeshift {

/// Stable exit-code contract of the command-line front end.
inline constexpr int exit_ok = 0;            // all expected verdicts matched
inline constexpr int exit_mismatch = 1;      // a verdict differed from expectation
inline constexpr int exit_inconclusive = 2;  // precision/truncation insufficient
inline constexpr int exit_config = 3;        // invalid configuration

/// Full CLI entry point (testable): parses flags and an optional JSON config,
/// dispatches the command, writes the text report to `out` and diagnostics to
/// `err`, and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeshift
