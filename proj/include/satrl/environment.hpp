#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "satrl/topology.hpp"

namespace satrl {

/// Local agent state vector: 4 neighbour loads in Direction order
/// (missing ISL encoded as 1.0), 5-way previous-hop one-hot
/// (none + 4 directions), then the normalized destination offset
/// (drow/rows, dcol/cols). Fixed 11 entries for every cluster size.
inline constexpr int kObservationDim = 11;
using Observation = Eigen::Matrix<double, kObservationDim, 1>;

/// Reward constants. psi/Psi drive path shortening and loop punishment,
/// xi1..xi3/Xi drive load balancing and saturation avoidance.
struct RewardConfig {
    double psi = 1.0;
    double Psi = 10.0;
    double xi1 = 1.0;
    double xi2 = 1.0;
    double xi3 = 2.0;
    double Xi = 10.0;
    double low_threshold = 0.4;
    double high_threshold = 0.8;
    double saturation_threshold = 1.0;

    void validate() const;
    /// Load-band component for one traversed directed link.
    double load_component(double load) const;
    /// Total reward of an uncongested shortest path of `hops` hops:
    /// (hops-1)(psi+xi1) + (Psi+xi1).
    double shortest_path_low_load_reward(int hops) const;
};

enum class TerminalKind { None, Arrived, Dropped, HopLimit };

const char* to_string(TerminalKind k);

/// One hop of a packet's journey.
struct TraceStep {
    int node;
    Direction action;
    int next_node;
    double reward;
    double link_load;
    TerminalKind terminal;
};

/// Ordered record of one packet's journey from source toward destination.
struct EpisodeTrace {
    int source = -1;
    int destination = -1;
    std::vector<TraceStep> steps;

    int hops() const { return static_cast<int>(steps.size()); }
    TerminalKind outcome() const {
        return steps.empty() ? TerminalKind::None : steps.back().terminal;
    }
    bool arrived() const { return outcome() == TerminalKind::Arrived; }
    double total_reward() const;
    double max_link_load() const;
};

struct EpisodeOutcome {
    bool arrived = false;
    int hops = 0;
    double max_link_load = 0.0;
    double total_reward = 0.0;
};

EpisodeOutcome summarize(const EpisodeTrace& trace);

/// Per-packet MDP over one load snapshot. Loads are frozen within an
/// episode; dynamics enter between episodes via evolve_loads().
class Environment {
public:
    /// hop_limit <= 0 selects the default cap of 4 * node_count.
    Environment(Topology topo, LinkLoadMap loads, RewardConfig rewards,
                int hop_limit = 0);

    /// Starts a new episode. source != dest.
    Observation reset(int source, int dest);

    bool live() const { return live_; }
    int current_node() const { return current_; }
    int destination() const { return dest_; }
    int hop_limit() const { return hop_limit_; }
    const Topology& topology() const { return topo_; }
    const LinkLoadMap& loads() const { return loads_; }
    const RewardConfig& rewards() const { return rewards_; }
    const EpisodeTrace& trace() const { return trace_; }

    /// Observation of the current node.
    Observation observation() const;

    /// True exactly where an ISL exists at the current node.
    std::array<bool, 4> valid_actions() const;

    /// Reward and terminal kind the action would produce, without
    /// advancing the episode.
    std::pair<double, TerminalKind> compute_reward(Direction action) const;

    struct StepResult {
        Observation next_obs;
        double reward;
        TerminalKind terminal;
        int next_node;
    };

    /// Advances one hop. The returned observation is the next node's
    /// local view with prev-hop set to the link pointing back.
    StepResult step(Direction action);

private:
    void require_live() const;

    Topology topo_;
    LinkLoadMap loads_;
    RewardConfig rewards_;
    int hop_limit_;

    bool live_ = false;
    int current_ = -1;
    int dest_ = -1;
    int hops_ = 0;
    std::optional<Direction> prev_link_;  // direction back to previous hop
    std::vector<char> visited_;
    std::vector<int> dist_to_dest_;
    EpisodeTrace trace_;
};

/// Observation of `node` heading for `dest`. prev_link is the direction
/// of the ISL pointing back to the previous hop, if any.
Observation make_observation(const Topology& topo, const LinkLoadMap& loads,
                             int node, std::optional<Direction> prev_link,
                             int dest);

/// Returns `base` with `increment` added once to every directed link the
/// previous episode traversed, clamped at 1.0. `base` is not mutated, so
/// increments reset each episode.
LinkLoadMap evolve_loads(const LinkLoadMap& base, const EpisodeTrace& previous,
                         double increment = 0.20);

} // namespace satrl
