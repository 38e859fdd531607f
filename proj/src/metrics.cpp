#include "satrl/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace satrl {

double global_reward(const EpisodeTrace& trace, const CompositeWeights& weights,
                     UtilizationMode mode, double utilization_sign) {
    if (trace.steps.empty())
        throw std::invalid_argument("global_reward: empty trace");
    double utilization = 0.0;
    if (mode == UtilizationMode::Max) {
        utilization = trace.max_link_load();
    } else {
        for (const TraceStep& s : trace.steps) utilization += s.link_load;
        utilization /= static_cast<double>(trace.steps.size());
    }
    const double latency = static_cast<double>(trace.hops());
    const double dropped = trace.outcome() == TerminalKind::Dropped ? 1.0 : 0.0;
    return utilization_sign * weights.w1 * utilization - weights.w2 * latency -
           weights.w3 * dropped;
}

double local_reward(double threshold_margin, double local_delay,
                    double local_drop, const CompositeWeights& weights) {
    return weights.w4 * threshold_margin - weights.w5 * local_delay -
           weights.w6_effective() * local_drop;
}

std::vector<double> smooth(const std::vector<double>& series, int window) {
    if (window < 1)
        throw std::invalid_argument("smooth: window must be at least 1");
    std::vector<double> out(series.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        running += series[i];
        if (i >= static_cast<std::size_t>(window))
            running -= series[i - static_cast<std::size_t>(window)];
        const std::size_t span = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        out[i] = running / static_cast<double>(span);
    }
    return out;
}

std::optional<int> convergence_episode(const std::vector<double>& smoothed,
                                       double plateau, double tolerance,
                                       int sustain) {
    if (sustain < 1)
        throw std::invalid_argument("convergence_episode: sustain must be at least 1");
    int run = 0;
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        if (std::abs(smoothed[i] - plateau) <= tolerance) {
            if (++run >= sustain)
                return static_cast<int>(i) - sustain + 1;
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

double optimal_path_reward(const Topology& topo, const LinkLoadMap& loads,
                           const RewardConfig& rewards, int source, int dest) {
    if (!topo.valid_node(source) || !topo.valid_node(dest) || source == dest)
        throw std::invalid_argument("optimal_path_reward: invalid pair");
    const std::vector<int> dist = distances_from(topo, dest);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> best(static_cast<std::size_t>(topo.node_count()), neg_inf);
    best[static_cast<std::size_t>(dest)] = 0.0;

    // Nodes ordered by distance so that every distance-reducing successor
    // is already solved.
    std::vector<int> order(static_cast<std::size_t>(topo.node_count()));
    for (int i = 0; i < topo.node_count(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)]; });

    for (int node : order) {
        if (node == dest)
            continue;
        const int d_here = dist[static_cast<std::size_t>(node)];
        for (Direction d : kAllDirections) {
            auto next = neighbor(topo, node, d);
            if (!next || dist[static_cast<std::size_t>(*next)] != d_here - 1)
                continue;
            const double load = loads.at(node, d);
            if (load >= rewards.saturation_threshold)
                continue;  // a drop never arrives
            const double continuation = best[static_cast<std::size_t>(*next)];
            if (continuation == neg_inf)
                continue;
            const double hop = (*next == dest ? rewards.Psi : rewards.psi) +
                               rewards.load_component(load);
            best[static_cast<std::size_t>(node)] =
                std::max(best[static_cast<std::size_t>(node)], hop + continuation);
        }
    }
    if (best[static_cast<std::size_t>(source)] == neg_inf)
        throw std::runtime_error("optimal_path_reward: no unsaturated shortest path");
    return best[static_cast<std::size_t>(source)];
}

ComparisonTable compare_all_pairs(const AgentSet& agents, const Topology& topo,
                                  const LinkLoadMap& loads,
                                  const RewardConfig& rewards) {
    ComparisonTable table;
    const int n = topo.node_count();
    table.rows.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
    int fewer = 0;
    int high = 0;
    for (int source = 0; source < n; ++source) {
        for (int dest = 0; dest < n; ++dest) {
            if (source == dest)
                continue;
            RouteResult rl = greedy_route(agents, topo, loads, source, dest, rewards);
            PathResult spf = multi_cost_dijkstra(topo, loads, source, dest);
            table.rows.push_back(ComparisonRow{
                source, dest, rl.outcome.hops, rl.outcome.max_link_load,
                rl.outcome.arrived, spf.hops, spf.max_load});
            if (rl.outcome.arrived && rl.outcome.hops < spf.hops)
                ++fewer;
            if (rl.outcome.max_link_load > 0.8)
                ++high;
        }
    }
    const double total = static_cast<double>(table.rows.size());
    table.summary.share_rl_fewer_hops = fewer / total;
    table.summary.share_rl_high_load = high / total;
    return table;
}

void write_comparison_csv(const std::filesystem::path& path,
                          const ComparisonTable& table) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_comparison_csv: cannot open " + path.string());
    out << "src,dst,rl_hops,rl_maxload,rl_arrived,spf_hops,spf_maxload\n";
    char buf[160];
    for (const ComparisonRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.10g,%d,%d,%.10g\n", r.source,
                      r.dest, r.rl_hops, r.rl_max_load, r.rl_arrived ? 1 : 0,
                      r.spf_hops, r.spf_max_load);
        out << buf;
    }
}

void write_summary(const std::filesystem::path& path,
                   const ComparisonSummary& summary) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_summary: cannot open " + path.string());
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "{\n  \"share_rl_fewer_hops\": %.10g,\n  \"share_rl_high_load\": %.10g\n}\n",
                  summary.share_rl_fewer_hops, summary.share_rl_high_load);
    out << buf;
}

} // namespace satrl
