#pragma once

// Subcommands of the extinctlab tool. Each one writes its files and a
// summary.json into an output directory it locks for the duration of the run.
//
// Exit codes: 0 positive verdict (convergent, extinct, finite bound),
// 1 negative verdict, 2 inconclusive or incoherent, 64 usage/config error,
// 70 numerical failure.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "extinctlab/config.hpp"

namespace extinctlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitSoftware = 70;

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
  std::vector<std::string> files;
};

CommandResult cmd_dini(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_bound(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_spectral(const RunConfig& cfg, const std::filesystem::path& out);
/// All four in subdirectories plus the cross-checks between them.
CommandResult cmd_verify(const RunConfig& cfg, const std::filesystem::path& out);

/// Parses argv, runs the subcommand and returns the exit code. Messages go
/// to stderr, a one-line verdict to stdout.
int run_cli(int argc, char** argv);

}  // namespace extinctlab
