#include "satrl/baseline.hpp"

#include <limits>
#include <stdexcept>

namespace satrl {

namespace {

struct Label {
    double primary = std::numeric_limits<double>::infinity();   // hops, or sum of 1+load
    double secondary = std::numeric_limits<double>::infinity(); // load sum
    std::vector<int> path;

    bool better_than(const Label& other) const {
        constexpr double eps = 1e-12;
        if (primary < other.primary - eps) return true;
        if (primary > other.primary + eps) return false;
        if (secondary < other.secondary - eps) return true;
        if (secondary > other.secondary + eps) return false;
        return path < other.path;
    }
};

// Label-correcting search over an additive lexicographic cost with a
// node-sequence tie break. Every edge contributes at least 1 to the
// primary cost, so optimal walks are simple and the fixed point holds the
// unique optimum under the documented ordering.
Label best_path(const Topology& topo, const LinkLoadMap& loads, int source,
                int dest, bool exclude_high, double avoid_threshold,
                bool fallback_cost) {
    const int n = topo.node_count();
    std::vector<Label> label(static_cast<std::size_t>(n));
    label[static_cast<std::size_t>(source)] = Label{0.0, 0.0, {source}};

    bool changed = true;
    while (changed) {
        changed = false;
        for (int node = 0; node < n; ++node) {
            const Label cur = label[static_cast<std::size_t>(node)];
            if (cur.path.empty())
                continue;
            for (Direction d : kAllDirections) {
                auto next = neighbor(topo, node, d);
                if (!next)
                    continue;
                const double load = loads.at(node, d);
                if (exclude_high && load > avoid_threshold)
                    continue;
                Label cand;
                cand.primary = cur.primary + (fallback_cost ? 1.0 + load : 1.0);
                cand.secondary = cur.secondary + load;
                cand.path = cur.path;
                cand.path.push_back(*next);
                Label& dst = label[static_cast<std::size_t>(*next)];
                if (dst.path.empty() || cand.better_than(dst)) {
                    dst = std::move(cand);
                    changed = true;
                }
            }
        }
    }
    return label[static_cast<std::size_t>(dest)];
}

} // namespace

PathResult multi_cost_dijkstra(const Topology& topo, const LinkLoadMap& loads,
                               int source, int dest, double avoid_threshold) {
    if (!topo.valid_node(source) || !topo.valid_node(dest))
        throw std::out_of_range("multi_cost_dijkstra: node id out of range");
    if (source == dest)
        throw std::invalid_argument("multi_cost_dijkstra: source equals destination");

    Label found = best_path(topo, loads, source, dest, true, avoid_threshold, false);
    bool feasible = !found.path.empty();
    if (!feasible) {
        found = best_path(topo, loads, source, dest, false, avoid_threshold, true);
        if (found.path.empty())
            throw std::runtime_error("multi_cost_dijkstra: destination unreachable");
    }

    PathResult result;
    result.nodes = found.path;
    result.hops = static_cast<int>(found.path.size()) - 1;
    result.feasible = feasible;
    for (std::size_t i = 0; i + 1 < found.path.size(); ++i) {
        int from = found.path[i];
        int to = found.path[i + 1];
        for (Direction d : kAllDirections) {
            auto nb = neighbor(topo, from, d);
            if (nb && *nb == to) {
                double load = loads.at(from, d);
                result.load_sum += load;
                result.max_load = std::max(result.max_load, load);
                break;
            }
        }
    }
    return result;
}

} // namespace satrl
