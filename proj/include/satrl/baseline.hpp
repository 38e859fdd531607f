#pragma once

#include <vector>

#include "satrl/topology.hpp"

namespace satrl {

/// Route computed by the rule-based shortest-path scheme.
struct PathResult {
    std::vector<int> nodes;  // source..dest, consecutive entries adjacent
    int hops = 0;
    double max_load = 0.0;   // max directed load along the path
    double load_sum = 0.0;   // sum of directed loads along the path
    bool feasible = false;   // false when the high-load exclusion had to be lifted
};

/// Rule-based route favouring short, lightly loaded paths. Directed links
/// above avoid_threshold are excluded outright; among the remaining
/// minimum-hop paths ties go to the smaller load sum, then to the
/// lexicographically smallest node sequence. If the exclusion disconnects
/// the pair, the full graph is searched with edge cost 1 + load and the
/// result is flagged infeasible.
PathResult multi_cost_dijkstra(const Topology& topo, const LinkLoadMap& loads,
                               int source, int dest,
                               double avoid_threshold = 0.8);

} // namespace satrl
