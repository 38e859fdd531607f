#include "satrl/environment.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace satrl {

void RewardConfig::validate() const {
    if (psi <= 0 || Psi <= 0 || xi1 <= 0 || xi2 <= 0 || xi3 <= 0 || Xi <= 0)
        throw std::invalid_argument("RewardConfig: all magnitudes must be positive");
    if (Psi < 10.0 * psi)
        throw std::invalid_argument("RewardConfig: Psi must be at least 10*psi");
    if (Xi < 10.0 * psi)
        throw std::invalid_argument("RewardConfig: Xi must be at least 10*psi");
    if (!(0.0 < low_threshold && low_threshold < high_threshold &&
          high_threshold < saturation_threshold))
        throw std::invalid_argument("RewardConfig: thresholds must be ordered");
}

double RewardConfig::load_component(double load) const {
    if (load >= saturation_threshold) return -Xi;
    if (load > high_threshold) return -xi3;
    if (load >= low_threshold) return -xi2;  // the boundary joins the middle band
    return xi1;
}

double RewardConfig::shortest_path_low_load_reward(int hops) const {
    return (hops - 1) * (psi + xi1) + (Psi + xi1);
}

const char* to_string(TerminalKind k) {
    switch (k) {
    case TerminalKind::None: return "none";
    case TerminalKind::Arrived: return "arrived";
    case TerminalKind::Dropped: return "dropped";
    case TerminalKind::HopLimit: return "hop_limit";
    }
    return "?";
}

double EpisodeTrace::total_reward() const {
    double sum = 0.0;
    for (const TraceStep& s : steps) sum += s.reward;
    return sum;
}

double EpisodeTrace::max_link_load() const {
    double mx = 0.0;
    for (const TraceStep& s : steps) mx = std::max(mx, s.link_load);
    return mx;
}

EpisodeOutcome summarize(const EpisodeTrace& trace) {
    return EpisodeOutcome{trace.arrived(), trace.hops(), trace.max_link_load(),
                          trace.total_reward()};
}

Observation make_observation(const Topology& topo, const LinkLoadMap& loads,
                             int node, std::optional<Direction> prev_link,
                             int dest) {
    Observation obs = Observation::Zero();
    for (Direction d : kAllDirections) {
        int i = static_cast<int>(d);
        // Missing ISLs read as fully loaded so the network never finds
        // them attractive even though the mask already excludes them.
        obs[i] = neighbor(topo, node, d) ? loads.at(node, d) : 1.0;
    }
    int prev_index = prev_link ? 1 + static_cast<int>(*prev_link) : 0;
    obs[4 + prev_index] = 1.0;
    obs[9] = static_cast<double>(topo.row_of(dest) - topo.row_of(node)) / topo.rows;
    obs[10] = static_cast<double>(topo.col_of(dest) - topo.col_of(node)) / topo.cols;
    return obs;
}

Environment::Environment(Topology topo, LinkLoadMap loads, RewardConfig rewards,
                         int hop_limit)
    : topo_(topo), loads_(std::move(loads)), rewards_(rewards),
      hop_limit_(hop_limit > 0 ? hop_limit : 4 * topo.node_count()) {
    rewards_.validate();
    if (loads_.node_count() != topo_.node_count())
        throw std::invalid_argument("Environment: load map does not match topology");
}

Observation Environment::reset(int source, int dest) {
    if (!topo_.valid_node(source) || !topo_.valid_node(dest))
        throw std::out_of_range("reset: node id out of range");
    if (source == dest)
        throw std::invalid_argument("reset: source and destination must differ");
    live_ = true;
    current_ = source;
    dest_ = dest;
    hops_ = 0;
    prev_link_.reset();
    visited_.assign(static_cast<std::size_t>(topo_.node_count()), 0);
    visited_[static_cast<std::size_t>(source)] = 1;
    dist_to_dest_ = distances_from(topo_, dest);
    trace_ = EpisodeTrace{source, dest, {}};
    return observation();
}

void Environment::require_live() const {
    if (!live_)
        throw std::logic_error("environment: episode is not live");
}

Observation Environment::observation() const {
    require_live();
    return make_observation(topo_, loads_, current_, prev_link_, dest_);
}

std::array<bool, 4> Environment::valid_actions() const {
    require_live();
    return action_mask(topo_, current_);
}

std::pair<double, TerminalKind> Environment::compute_reward(Direction action) const {
    require_live();
    auto next = neighbor(topo_, current_, action);
    if (!next)
        throw std::invalid_argument("compute_reward: no ISL in that direction");

    const double load = loads_.at(current_, action);
    const int d_cur = dist_to_dest_[static_cast<std::size_t>(current_)];
    const int d_next = dist_to_dest_[static_cast<std::size_t>(*next)];

    double path = 0.0;
    if (*next == dest_) {
        path = rewards_.Psi;  // only the final transition carries the goal bonus
    } else if (d_next < d_cur) {
        path = rewards_.psi;
    } else if (d_next > d_cur) {
        // Loop punishment lands on the node whose action revisits; a
        // plain extension onto fresh ground costs only psi.
        path = visited_[static_cast<std::size_t>(*next)] ? -rewards_.Psi : -rewards_.psi;
    }
    // d_next == d_cur cannot happen on a bounded grid; on a torus the
    // path component is neutral.

    const double band = rewards_.load_component(load);

    TerminalKind kind = TerminalKind::None;
    if (load >= rewards_.saturation_threshold)
        kind = TerminalKind::Dropped;
    else if (*next == dest_)
        kind = TerminalKind::Arrived;

    return {path + band, kind};
}

Environment::StepResult Environment::step(Direction action) {
    require_live();
    auto [reward, kind] = compute_reward(action);
    const int next = *neighbor(topo_, current_, action);
    const double load = loads_.at(current_, action);

    ++hops_;
    if (kind == TerminalKind::None && hops_ >= hop_limit_)
        kind = TerminalKind::HopLimit;

    trace_.steps.push_back(TraceStep{current_, action, next, reward, load, kind});
    visited_[static_cast<std::size_t>(next)] = 1;
    current_ = next;
    prev_link_ = opposite(action);
    if (kind != TerminalKind::None)
        live_ = false;

    Observation next_obs = make_observation(topo_, loads_, next, prev_link_, dest_);
    return StepResult{next_obs, reward, kind, next};
}

LinkLoadMap evolve_loads(const LinkLoadMap& base, const EpisodeTrace& previous,
                         double increment) {
    LinkLoadMap out = base;
    std::set<std::pair<int, int>> used;
    for (const TraceStep& s : previous.steps)
        used.emplace(s.node, static_cast<int>(s.action));
    for (auto [node, dir] : used) {
        if (node < 0 || node >= base.node_count())
            throw std::out_of_range("evolve_loads: trace node outside load map");
        Direction d = static_cast<Direction>(dir);
        out.set(node, d, std::min(1.0, base.at(node, d) + increment));
    }
    return out;
}

} // namespace satrl
