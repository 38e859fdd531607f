#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace satrl {

/// Exit codes shared by the CLI: 0 success, 1 usage/config error,
/// 2 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Trains per the scenario and writes per-agent checkpoints, a manifest
/// and rewards.csv under out_dir. Prints the convergence episode for
/// fixed-pair runs when the smoothed reward reaches the analytic plateau.
int cmd_train(const std::filesystem::path& scenario_path,
              const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed_override,
              std::optional<int> episodes_override, std::ostream& log);

/// All-pairs learner-vs-baseline comparison; writes comparison.csv and
/// summary.json under out_dir.
int cmd_compare(const std::filesystem::path& scenario_path,
                const std::filesystem::path& checkpoint_dir,
                const std::filesystem::path& out_dir, std::ostream& log);

/// Prints the rule-based route for one pair.
int cmd_baseline(const std::filesystem::path& scenario_path, int source,
                 int dest, std::ostream& out, std::ostream& log);

} // namespace satrl
