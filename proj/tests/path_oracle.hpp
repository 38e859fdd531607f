#pragma once

// Exhaustive simple-path enumeration used as the reference for the
// rule-based route: try every path under the high-load exclusion, rank by
// (hops, load sum, node sequence); fall back to 1+load edge costs when the
// exclusion disconnects the pair. Test-only code, independent of the
// label-correcting search it checks.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "satrl/baseline.hpp"
#include "satrl/topology.hpp"

namespace satrl::testing {

struct EnumeratedPath {
    std::vector<int> nodes;
    double load_sum = 0.0;
    double max_load = 0.0;
};

inline void enumerate_paths(const Topology& topo, const LinkLoadMap& loads,
                            int node, int dest, std::vector<int>& stack,
                            std::vector<char>& used, double load_sum,
                            double max_load, bool exclude_high,
                            std::vector<EnumeratedPath>& out) {
    if (node == dest) {
        out.push_back(EnumeratedPath{stack, load_sum, max_load});
        return;
    }
    for (Direction d : kAllDirections) {
        auto next = neighbor(topo, node, d);
        if (!next || used[static_cast<std::size_t>(*next)])
            continue;
        const double load = loads.at(node, d);
        if (exclude_high && load > 0.8)
            continue;
        used[static_cast<std::size_t>(*next)] = 1;
        stack.push_back(*next);
        enumerate_paths(topo, loads, *next, dest, stack, used, load_sum + load,
                        std::max(max_load, load), exclude_high, out);
        stack.pop_back();
        used[static_cast<std::size_t>(*next)] = 0;
    }
}

inline PathResult enumerate_best(const Topology& topo, const LinkLoadMap& loads,
                                 int source, int dest) {
    std::vector<EnumeratedPath> paths;
    std::vector<int> stack{source};
    std::vector<char> used(static_cast<std::size_t>(topo.node_count()), 0);
    used[static_cast<std::size_t>(source)] = 1;
    enumerate_paths(topo, loads, source, dest, stack, used, 0.0, 0.0, true, paths);

    bool feasible = !paths.empty();
    if (!feasible) {
        used.assign(static_cast<std::size_t>(topo.node_count()), 0);
        used[static_cast<std::size_t>(source)] = 1;
        stack.assign(1, source);
        enumerate_paths(topo, loads, source, dest, stack, used, 0.0, 0.0, false, paths);
    }
    if (paths.empty())
        throw std::runtime_error("enumerate_best: unreachable pair");

    const EnumeratedPath* best = nullptr;
    for (const EnumeratedPath& p : paths) {
        if (!best) {
            best = &p;
            continue;
        }
        double p_primary, b_primary;
        if (feasible) {
            p_primary = static_cast<double>(p.nodes.size());
            b_primary = static_cast<double>(best->nodes.size());
        } else {
            p_primary = static_cast<double>(p.nodes.size() - 1) + p.load_sum;
            b_primary = static_cast<double>(best->nodes.size() - 1) + best->load_sum;
        }
        constexpr double eps = 1e-12;
        bool better = false;
        if (p_primary < b_primary - eps) {
            better = true;
        } else if (p_primary <= b_primary + eps) {
            if (p.load_sum < best->load_sum - eps)
                better = true;
            else if (p.load_sum <= best->load_sum + eps && p.nodes < best->nodes)
                better = true;
        }
        if (better)
            best = &p;
    }

    PathResult result;
    result.nodes = best->nodes;
    result.hops = static_cast<int>(best->nodes.size()) - 1;
    result.load_sum = best->load_sum;
    result.max_load = best->max_load;
    result.feasible = feasible;
    return result;
}

} // namespace satrl::testing
