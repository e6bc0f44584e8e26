#pragma once

namespace hta::cli {

inline constexpr const char* kVersion = "hta 0.1.0";

// Full CLI entry point; returns the process exit code (0 success, 2 config
// or parse error, 3 infeasible/budget, 4 I/O). Exposed so tests can drive
// the tool in-process.
int run(int argc, const char* const* argv);

}  // namespace hta::cli
