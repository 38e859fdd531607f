#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "satrl/baseline.hpp"
#include "satrl/environment.hpp"
#include "satrl/madrl.hpp"

namespace satrl {

/// Weights of the composite global/local evaluation rewards. w6 falls
/// back to w4 when unset, mirroring the reuse in the printed equation.
struct CompositeWeights {
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double w4 = 1.0;
    double w5 = 1.0;
    std::optional<double> w6;

    double w6_effective() const { return w6.value_or(w4); }
};

enum class UtilizationMode { Max, Mean };

/// Composite end-to-end reward of a finished episode:
/// w1 * U - w2 * L - w3 * D with U the max (or mean) traversed
/// utilization, L the hop count and D the drop indicator. The sign of the
/// utilization term is configurable; +1 follows the printed equation.
double global_reward(const EpisodeTrace& trace, const CompositeWeights& weights,
                     UtilizationMode mode = UtilizationMode::Max,
                     double utilization_sign = 1.0);

/// Immediate per-hop reward: w4 * threshold_margin - w5 * local_delay
/// - w6 * local_drop.
double local_reward(double threshold_margin, double local_delay,
                    double local_drop, const CompositeWeights& weights);

/// Trailing moving average; the window shrinks at the start of the
/// series, so the output has the input's length.
std::vector<double> smooth(const std::vector<double>& series, int window);

/// First episode from which the smoothed reward stays within `tolerance`
/// of `plateau` for `sustain` consecutive episodes.
std::optional<int> convergence_episode(const std::vector<double>& smoothed,
                                       double plateau, double tolerance,
                                       int sustain);

/// Best achievable episode reward over distance-monotone paths, i.e. the
/// analytic plateau a converged shortest-path policy can reach on this
/// load snapshot. Saturated links are excluded (they end the episode).
double optimal_path_reward(const Topology& topo, const LinkLoadMap& loads,
                           const RewardConfig& rewards, int source, int dest);

struct ComparisonRow {
    int source;
    int dest;
    int rl_hops;
    double rl_max_load;
    bool rl_arrived;
    int spf_hops;
    double spf_max_load;
};

struct ComparisonSummary {
    double share_rl_fewer_hops = 0.0;  // learner strictly shorter
    double share_rl_high_load = 0.0;   // learner crossed a > 0.8 link
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    ComparisonSummary summary;
};

/// Greedy learner vs rule-based baseline on identical loads for every
/// ordered (source, dest) pair.
ComparisonTable compare_all_pairs(const AgentSet& agents, const Topology& topo,
                                  const LinkLoadMap& loads,
                                  const RewardConfig& rewards);

/// CSV columns: src,dst,rl_hops,rl_maxload,rl_arrived,spf_hops,spf_maxload.
void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonTable& table);
void write_summary(const std::filesystem::path& path,
                   const ComparisonSummary& summary);

} // namespace satrl
