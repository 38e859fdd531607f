#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "satrl/environment.hpp"
#include "satrl/madrl.hpp"
#include "satrl/topology.hpp"

namespace satrl {

/// Scenario parse failure carrying the offending line and key.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, std::string key, const std::string& message)
        : std::runtime_error("scenario line " + std::to_string(line) + " (" +
                             (key.empty() ? "?" : key) + "): " + message),
          line_(line), key_(std::move(key)) {}

    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

/// One experiment definition. Every field has a default; an empty file is
/// the 12-node static scenario.
struct Scenario {
    // [topology]
    int rows = 4;
    int cols = 3;
    bool wrap = false;

    // [loads]
    std::uint64_t load_seed = 11;
    double hotspot_fraction = 0.2;
    double hotspot_boost = 0.35;
    std::vector<std::tuple<int, Direction, double>> explicit_loads;

    // [reward]
    RewardConfig reward;

    // [training]
    TrainingRunConfig training;

    // [eval]
    int smooth_window = 50;
    double tolerance = 0.0;  // <= 0 selects psi + xi1
    int sustain = 50;

    Topology topology() const;
    LinkLoadMap loads() const;
    double convergence_tolerance() const {
        return tolerance > 0.0 ? tolerance : reward.psi + reward.xi1;
    }
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::filesystem::path& path);

} // namespace satrl
