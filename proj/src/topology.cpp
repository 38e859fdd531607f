#include "satrl/topology.hpp"

#include <cctype>
#include <queue>
#include <stdexcept>
#include <string>

#include "satrl/rng.hpp"

namespace satrl {

const char* to_string(Direction d) {
    switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    }
    return "?";
}

std::optional<Direction> direction_from_string(std::string_view name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "up") return Direction::Up;
    if (lower == "down") return Direction::Down;
    if (lower == "left") return Direction::Left;
    if (lower == "right") return Direction::Right;
    return std::nullopt;
}

Topology build_grid(int rows, int cols, bool wrap) {
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("build_grid: rows and cols must be at least 2");
    if (wrap && (rows < 3 || cols < 3))
        throw std::invalid_argument("build_grid: torus needs rows and cols of at least 3");
    return Topology{rows, cols, wrap};
}

std::optional<int> neighbor(const Topology& topo, int node, Direction d) {
    if (!topo.valid_node(node))
        throw std::out_of_range("neighbor: node id out of range");
    int r = topo.row_of(node) + row_delta(d);
    int c = topo.col_of(node) + col_delta(d);
    if (topo.wrap) {
        r = (r + topo.rows) % topo.rows;
        c = (c + topo.cols) % topo.cols;
    } else if (r < 0 || r >= topo.rows || c < 0 || c >= topo.cols) {
        return std::nullopt;
    }
    return topo.id_of(r, c);
}

std::array<std::optional<int>, 4> neighbors(const Topology& topo, int node) {
    std::array<std::optional<int>, 4> out;
    for (Direction d : kAllDirections)
        out[static_cast<int>(d)] = neighbor(topo, node, d);
    return out;
}

std::array<bool, 4> action_mask(const Topology& topo, int node) {
    std::array<bool, 4> mask{};
    for (Direction d : kAllDirections)
        mask[static_cast<int>(d)] = neighbor(topo, node, d).has_value();
    return mask;
}

std::vector<int> distances_from(const Topology& topo, int node) {
    if (!topo.valid_node(node))
        throw std::out_of_range("distances_from: node id out of range");
    std::vector<int> dist(static_cast<std::size_t>(topo.node_count()), -1);
    std::queue<int> frontier;
    dist[static_cast<std::size_t>(node)] = 0;
    frontier.push(node);
    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop();
        for (Direction d : kAllDirections) {
            if (auto next = neighbor(topo, cur, d)) {
                if (dist[static_cast<std::size_t>(*next)] < 0) {
                    dist[static_cast<std::size_t>(*next)] = dist[static_cast<std::size_t>(cur)] + 1;
                    frontier.push(*next);
                }
            }
        }
    }
    return dist;
}

int hop_distance(const Topology& topo, int a, int b) {
    if (!topo.valid_node(a) || !topo.valid_node(b))
        throw std::out_of_range("hop_distance: node id out of range");
    if (a == b) return 0;
    return distances_from(topo, a)[static_cast<std::size_t>(b)];
}

LinkLoadMap zero_loads(const Topology& topo) {
    LinkLoadMap map;
    map.loads = Eigen::MatrixX4d::Zero(topo.node_count(), 4);
    return map;
}

LinkLoadMap random_loads(const Topology& topo, std::uint64_t seed,
                         double hotspot_fraction, double hotspot_boost) {
    if (hotspot_fraction < 0.0 || hotspot_fraction > 1.0 ||
        hotspot_boost < 0.0 || hotspot_boost > 1.0)
        throw std::invalid_argument("random_loads: fractions must lie in [0, 1]");

    LinkLoadMap map = zero_loads(topo);
    Rng rng(seed);
    // Fixed traversal order (node asc, direction asc) keeps the map
    // reproducible for a given seed.
    for (int node = 0; node < topo.node_count(); ++node) {
        for (Direction d : kAllDirections) {
            if (!neighbor(topo, node, d))
                continue;
            double load = rng.uniform(0.05, 0.6);
            if (rng.uniform() < hotspot_fraction)
                load += rng.uniform(0.0, hotspot_boost);
            map.set(node, d, std::min(load, 0.95));
        }
    }
    return map;
}

} // namespace satrl
