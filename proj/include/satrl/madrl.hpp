#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "satrl/environment.hpp"
#include "satrl/qnet.hpp"
#include "satrl/rng.hpp"
#include "satrl/topology.hpp"

namespace satrl {

/// Shared training hyperparameters. Every agent uses the same values;
/// only the parameters themselves are per node.
/// gamma stays below ~0.92 on these clusters: with psi == xi1 a larger
/// discount makes padding a route with extra low-load hops worth more
/// than arriving, and greedy routes stop being shortest paths.
struct Hyperparameters {
    double gamma = 0.9;
    double learning_rate = 1e-3;
    int batch_size = 32;
    int buffer_capacity = 10000;
    int target_interval = 200;  // train steps between target refreshes
    int warmup = 500;           // stored transitions before training starts
    std::vector<int> hidden = {64, 64};

    std::vector<int> layout() const;
    void validate() const;
};

/// One satellite's learner: online net, bootstrap target copy, replay
/// buffer. Agents never read each other's buffers; only bootstrap
/// Q-values cross node boundaries.
struct Agent {
    QNetwork online;
    QNetwork target;
    ReplayBuffer buffer;
    int train_steps = 0;
};

struct AgentSet {
    Topology topo;
    Hyperparameters hyper;
    std::vector<Agent> agents;
};

/// Fresh agent per topology node, deterministically seeded.
AgentSet make_agents(const Topology& topo, const Hyperparameters& hyper,
                     std::uint64_t seed);

enum class PairMode { Fixed, Uniform };

/// Exponentially decaying exploration rate, clamped below at `end`.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    double decay = 0.0;  // <= 0 selects the default derived from the budget

    /// Default decay reaches epsilon 0.1 at 60% of the episode budget.
    static double default_decay(double start, int episodes);
    double at(int episode, int episodes) const;
};

struct TrainingRunConfig {
    int episodes = 2000;
    EpsilonSchedule epsilon;
    PairMode pair_mode = PairMode::Fixed;
    int source = 0;
    int dest = 11;
    bool dynamic_evolution = false;
    std::uint64_t seed = 1;
    int hop_limit = 0;  // <= 0 selects 4 * node_count
    Hyperparameters hyper;
};

struct EpisodeRecord {
    double total_reward = 0.0;
    TerminalKind outcome = TerminalKind::None;
    int hops = 0;
    double max_link_load = 0.0;
};

using RewardHistory = std::vector<EpisodeRecord>;

/// Epsilon-greedy action choice restricted to valid directions; greedy
/// ties break toward the lowest direction index.
Direction select_action(const QNetwork& net, const Observation& obs,
                        double epsilon, const std::array<bool, 4>& mask,
                        Rng& rng);

struct EpisodeResult {
    EpisodeTrace trace;
    /// (acting node, stored transition) per step, in step order.
    std::vector<std::pair<int, Transition>> transitions;
};

/// Runs one episode on a freshly reset environment. Each transition is
/// stored in the acting node's buffer; with `learn` the acting agent takes
/// one SGD step per push once its buffer passes warm-up and refreshes its
/// target on schedule. Bootstrap targets come from the next hop's target
/// network.
EpisodeResult run_episode(AgentSet& agents, Environment& env, double epsilon,
                          bool learn, Rng& rng);

struct TrainResult {
    AgentSet agents;
    RewardHistory history;
};

/// Full training run. With dynamic_evolution each episode starts from the
/// base map plus 20% on every link the previous episode used.
/// Deterministic for a given config seed.
TrainResult train(const Topology& topo, const LinkLoadMap& loads,
                  const TrainingRunConfig& config, const RewardConfig& rewards);

struct RouteResult {
    EpisodeOutcome outcome;
    std::vector<int> path;  // node sequence walked, starting at source
};

/// Greedy rollout (epsilon 0, no learning).
RouteResult greedy_route(const AgentSet& agents, const Topology& topo,
                         const LinkLoadMap& loads, int source, int dest,
                         const RewardConfig& rewards, int hop_limit = 0);

/// Checkpoints: one network file per node plus a manifest naming the
/// topology and layout.
void save_agents(const std::filesystem::path& dir, const AgentSet& agents);
AgentSet load_agents(const std::filesystem::path& dir);

/// Reward history CSV: episode, total_reward, smoothed_reward, hops,
/// max_load, outcome.
void write_history_csv(const std::filesystem::path& path,
                       const RewardHistory& history, int smooth_window);

} // namespace satrl
