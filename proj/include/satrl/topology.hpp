#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace satrl {

/// ISL direction on the grid. Up/Down move along the row axis
/// (row - 1 / row + 1), Left/Right along the column axis.
enum class Direction : int { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kNumDirections = 4;
inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::Up, Direction::Down, Direction::Left, Direction::Right};

constexpr Direction opposite(Direction d) {
    switch (d) {
    case Direction::Up: return Direction::Down;
    case Direction::Down: return Direction::Up;
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
    }
    return d;
}

constexpr int row_delta(Direction d) {
    return d == Direction::Up ? -1 : d == Direction::Down ? 1 : 0;
}

constexpr int col_delta(Direction d) {
    return d == Direction::Left ? -1 : d == Direction::Right ? 1 : 0;
}

const char* to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view name);

/// Rectangular satellite cluster with up to four ISLs per node.
/// Node ids are column-major: id = col * rows + row.
struct Topology {
    int rows = 0;
    int cols = 0;
    bool wrap = false;

    int node_count() const { return rows * cols; }
    int row_of(int id) const { return id % rows; }
    int col_of(int id) const { return id / rows; }
    int id_of(int row, int col) const { return col * rows + row; }
    bool valid_node(int id) const { return id >= 0 && id < node_count(); }
};

/// Builds a grid cluster. rows, cols >= 2; a torus additionally needs
/// rows, cols >= 3 so neighbours stay distinct.
Topology build_grid(int rows, int cols, bool wrap = false);

/// Neighbour id in the given direction, or nullopt at a grid edge.
std::optional<int> neighbor(const Topology& topo, int node, Direction d);

/// All four potential neighbours of a node, indexed by Direction.
std::array<std::optional<int>, 4> neighbors(const Topology& topo, int node);

/// True where an ISL exists.
std::array<bool, 4> action_mask(const Topology& topo, int node);

/// Minimum ISL hops between two nodes (BFS).
int hop_distance(const Topology& topo, int a, int b);

/// BFS hop distances from one node to every node.
std::vector<int> distances_from(const Topology& topo, int node);

/// Per-directed-link utilization fractions in [0, 1]. Entries are stored
/// densely per (node, direction); only slots where an ISL exists are
/// meaningful. A load >= 1.0 is a saturated link.
struct LinkLoadMap {
    Eigen::MatrixX4d loads;

    double at(int node, Direction d) const {
        return loads(node, static_cast<int>(d));
    }
    void set(int node, Direction d, double value) {
        loads(node, static_cast<int>(d)) = value;
    }
    int node_count() const { return static_cast<int>(loads.rows()); }
};

/// All-zero load map sized for a topology.
LinkLoadMap zero_loads(const Topology& topo);

/// Seeded random load map. Base loads are uniform in [0.05, 0.6]; a
/// hotspot_fraction of directed links gets an extra uniform boost up to
/// hotspot_boost. Results are clamped to 0.95 so the base scenario has
/// no saturated links. Both directions of an ISL are drawn independently.
LinkLoadMap random_loads(const Topology& topo, std::uint64_t seed,
                         double hotspot_fraction, double hotspot_boost);

} // namespace satrl
