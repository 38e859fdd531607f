#include "satrl/commands.hpp"

#include <cstdio>
#include <exception>

#include "satrl/baseline.hpp"
#include "satrl/metrics.hpp"
#include "satrl/scenario.hpp"

namespace satrl {

namespace {

struct LoadedScenario {
    Scenario scenario;
    Topology topo;
    LinkLoadMap loads;
};

LoadedScenario load_scenario(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override,
                             std::optional<int> episodes_override) {
    Scenario sc = parse_scenario_file(path);
    if (seed_override)
        sc.training.seed = *seed_override;
    if (episodes_override) {
        if (*episodes_override < 0)
            throw std::invalid_argument("episode override must be non-negative");
        sc.training.episodes = *episodes_override;
    }
    Topology topo = sc.topology();
    LinkLoadMap loads = sc.loads();
    return LoadedScenario{std::move(sc), topo, std::move(loads)};
}

} // namespace

int cmd_train(const std::filesystem::path& scenario_path,
              const std::filesystem::path& out_dir,
              std::optional<std::uint64_t> seed_override,
              std::optional<int> episodes_override, std::ostream& log) {
    LoadedScenario ls;
    try {
        ls = load_scenario(scenario_path, seed_override, episodes_override);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        TrainResult result = train(ls.topo, ls.loads, ls.scenario.training, ls.scenario.reward);
        std::filesystem::create_directories(out_dir);
        save_agents(out_dir / "agents", result.agents);
        write_history_csv(out_dir / "rewards.csv", result.history, ls.scenario.smooth_window);
        log << "trained " << result.history.size() << " episodes on "
            << ls.topo.node_count() << " nodes\n";

        if (ls.scenario.training.pair_mode == PairMode::Fixed &&
            !result.history.empty()) {
            std::vector<double> totals;
            totals.reserve(result.history.size());
            for (const EpisodeRecord& r : result.history)
                totals.push_back(r.total_reward);
            const double plateau =
                optimal_path_reward(ls.topo, ls.loads, ls.scenario.reward,
                                    ls.scenario.training.source, ls.scenario.training.dest);
            const auto episode = convergence_episode(
                smooth(totals, ls.scenario.smooth_window), plateau,
                ls.scenario.convergence_tolerance(), ls.scenario.sustain);
            if (episode)
                log << "converged at episode " << *episode << " (plateau " << plateau << ")\n";
            else
                log << "no convergence within budget (plateau " << plateau << ")\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_compare(const std::filesystem::path& scenario_path,
                const std::filesystem::path& checkpoint_dir,
                const std::filesystem::path& out_dir, std::ostream& log) {
    LoadedScenario ls;
    AgentSet agents;
    try {
        ls = load_scenario(scenario_path, std::nullopt, std::nullopt);
        agents = load_agents(checkpoint_dir);
        if (agents.topo.rows != ls.topo.rows || agents.topo.cols != ls.topo.cols ||
            agents.topo.wrap != ls.topo.wrap) {
            log << "error: checkpoint topology (" << agents.topo.rows << "x"
                << agents.topo.cols << ") does not match scenario (" << ls.topo.rows
                << "x" << ls.topo.cols << ")\n";
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        ComparisonTable table = compare_all_pairs(agents, ls.topo, ls.loads, ls.scenario.reward);
        std::filesystem::create_directories(out_dir);
        write_comparison_csv(out_dir / "comparison.csv", table);
        write_summary(out_dir / "summary.json", table.summary);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "compared %zu pairs: fewer-hops share %.4f, high-load share %.4f\n",
                      table.rows.size(), table.summary.share_rl_fewer_hops,
                      table.summary.share_rl_high_load);
        log << buf;
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_baseline(const std::filesystem::path& scenario_path, int source,
                 int dest, std::ostream& out, std::ostream& log) {
    LoadedScenario ls;
    try {
        ls = load_scenario(scenario_path, std::nullopt, std::nullopt);
        if (!ls.topo.valid_node(source) || !ls.topo.valid_node(dest)) {
            log << "error: node ids must lie in 0.." << ls.topo.node_count() - 1 << "\n";
            return kExitUsage;
        }
        if (source == dest) {
            log << "error: source and destination must differ\n";
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        PathResult path = multi_cost_dijkstra(ls.topo, ls.loads, source, dest);
        out << "path:";
        for (int node : path.nodes) out << ' ' << node;
        out << "\n";
        char buf[120];
        std::snprintf(buf, sizeof buf, "hops: %d\nmax_load: %.10g\nload_sum: %.10g\nfeasible: %s\n",
                      path.hops, path.max_load, path.load_sum,
                      path.feasible ? "yes" : "no");
        out << buf;
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace satrl
