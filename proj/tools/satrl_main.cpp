#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "satrl/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent DQN routing simulator for satellite grid clusters"};
    app.require_subcommand(1);

    std::string scenario = "scenarios/default.ini";
    std::string out_dir = "out";
    std::string checkpoints;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    int source = 0;
    int dest = 0;

    CLI::App* train = app.add_subcommand("train", "Train agents and write rewards CSV + checkpoints");
    train->add_option("--scenario", scenario, "Scenario file")->capture_default_str();
    train->add_option("--out", out_dir, "Output directory")->capture_default_str();
    train->add_option("--seed", seed, "Override the training seed");
    train->add_option("--episodes", episodes, "Override the episode budget");

    CLI::App* compare = app.add_subcommand("compare", "All-pairs learner vs. baseline comparison");
    compare->add_option("--scenario", scenario, "Scenario file")->capture_default_str();
    compare->add_option("--checkpoints", checkpoints, "Agent checkpoint directory")->required();
    compare->add_option("--out", out_dir, "Output directory")->capture_default_str();

    CLI::App* baseline = app.add_subcommand("baseline", "Print the rule-based route for one pair");
    baseline->add_option("--scenario", scenario, "Scenario file")->capture_default_str();
    baseline->add_option("--source", source, "Source node id")->required();
    baseline->add_option("--dest", dest, "Destination node id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? satrl::kExitOk : satrl::kExitUsage;
    }

    if (train->parsed())
        return satrl::cmd_train(scenario, out_dir, seed, episodes, std::cout);
    if (compare->parsed())
        return satrl::cmd_compare(scenario, checkpoints, out_dir, std::cout);
    if (baseline->parsed())
        return satrl::cmd_baseline(scenario, source, dest, std::cout, std::cerr);
    return satrl::kExitUsage;
}
