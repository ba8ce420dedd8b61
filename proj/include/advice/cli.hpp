#pragma once

#include <iosfwd>

namespace advice::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid flags or configuration.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/**
 * Entry point of the `advice` tool. Subcommands: plan, learn-ucb, learn-rfe,
 * sweep-beta, cmdp, eval. Settings resolve as built-in defaults, then the
 * `config` object of a --config manifest, then explicit flags. Every run
 * writes manifest.json into --out, which replays the run when passed back
 * through --config.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace advice::cli
