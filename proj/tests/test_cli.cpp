#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "satrl/commands.hpp"
#include "satrl/scenario.hpp"

using namespace satrl;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("satrl_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_file(const std::filesystem::path& path,
                                 const std::string& text) {
    std::ofstream out(path);
    out << text;
    return path;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

const char* kTinyScenario = R"(
[training]
episodes = 12
warmup = 16
batch = 8
hidden = 8
seed = 5
)";

} // namespace

TEST_CASE("an empty scenario is the 12-node static default") {
    const Scenario sc = parse_scenario_text("");
    CHECK(sc.rows == 4);
    CHECK(sc.cols == 3);
    CHECK(!sc.wrap);
    CHECK(sc.topology().node_count() == 12);
    CHECK(sc.training.episodes == 2000);
    CHECK(sc.training.pair_mode == PairMode::Fixed);
    CHECK(sc.training.source == 0);
    CHECK(sc.training.dest == 11);
    CHECK(!sc.training.dynamic_evolution);
    CHECK(sc.training.hyper.gamma == 0.9);
    CHECK(sc.reward.psi == 1.0);
    CHECK(sc.reward.Psi == 10.0);
    CHECK(sc.smooth_window == 50);
    CHECK(sc.convergence_tolerance() == doctest::Approx(2.0));
}

TEST_CASE("scenario keys override defaults") {
    const Scenario sc = parse_scenario_text(R"(
# 24-node cluster
[topology]
rows = 4
cols = 6

[loads]
seed = 24
hotspot_fraction = 0.25
link = 4 right 0.91
link = 22 Down 0.5

[reward]
xi3 = 3

[training]
episodes = 500
gamma = 0.9
pair_mode = uniform
dynamic_evolution = yes

[eval]
window = 25
tolerance = 1.5
sustain = 10
)");
    CHECK(sc.rows == 4);
    CHECK(sc.cols == 6);
    CHECK(sc.load_seed == 24);
    CHECK(sc.hotspot_fraction == 0.25);
    REQUIRE(sc.explicit_loads.size() == 2);
    CHECK(std::get<0>(sc.explicit_loads[0]) == 4);
    CHECK(std::get<1>(sc.explicit_loads[0]) == Direction::Right);
    CHECK(std::get<2>(sc.explicit_loads[0]) == 0.91);
    CHECK(sc.reward.xi3 == 3.0);
    CHECK(sc.training.episodes == 500);
    CHECK(sc.training.hyper.gamma == 0.9);
    CHECK(sc.training.pair_mode == PairMode::Uniform);
    CHECK(sc.training.dynamic_evolution);
    CHECK(sc.smooth_window == 25);
    CHECK(sc.convergence_tolerance() == 1.5);

    const LinkLoadMap loads = sc.loads();
    CHECK(loads.at(4, Direction::Right) == 0.91);
    CHECK(loads.at(22, Direction::Down) == 0.5);
}

TEST_CASE("scenario errors name the line and key") {
    try {
        parse_scenario_text("[topology]\nrows = 4\nrobs = 6\n");
        CHECK(false);
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 3);
        CHECK(e.key() == "robs");
    }

    try {
        parse_scenario_text("[training]\nepisodes = twelve\n");
        CHECK(false);
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 2);
        CHECK(e.key() == "episodes");
    }

    CHECK_THROWS_AS(parse_scenario_text("rows = 4\n"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[nowhere]\n"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[loads]\nlink = 4 sideways 0.5\n"),
                    ScenarioError);
    // Invalid cross-field combinations surface as scenario errors too.
    CHECK_THROWS_AS(parse_scenario_text("[training]\nsource = 3\ndest = 3\n"),
                    ScenarioError);
}

TEST_CASE("cmd_train writes checkpoints and a rewards CSV") {
    const auto dir = temp_dir("cmd_train");
    const auto scenario = write_file(dir / "scenario.ini", kTinyScenario);
    std::ostringstream log;
    const int code = cmd_train(scenario, dir / "out", std::nullopt, std::nullopt, log);
    CHECK(code == kExitOk);

    const std::string csv = read_file(dir / "out" / "rewards.csv");
    CHECK(count_lines(csv) == 13);  // header + 12 episodes
    CHECK(csv.rfind("episode,total_reward,smoothed_reward,hops,max_load,outcome\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "out" / "agents" / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "out" / "agents" / "agent_011.qnet"));
    CHECK(log.str().find("trained 12 episodes") != std::string::npos);
}

TEST_CASE("cmd_train with zero episodes still succeeds") {
    const auto dir = temp_dir("cmd_train_zero");
    const auto scenario = write_file(dir / "scenario.ini", kTinyScenario);
    std::ostringstream log;
    const int code = cmd_train(scenario, dir / "out", std::nullopt, 0, log);
    CHECK(code == kExitOk);
    CHECK(count_lines(read_file(dir / "out" / "rewards.csv")) == 1);  // header only
}

TEST_CASE("cmd_train is byte-deterministic for a fixed seed") {
    const auto dir = temp_dir("cmd_train_det");
    const auto scenario = write_file(dir / "scenario.ini", kTinyScenario);
    std::ostringstream log;
    CHECK(cmd_train(scenario, dir / "a", std::nullopt, std::nullopt, log) == kExitOk);
    CHECK(cmd_train(scenario, dir / "b", std::nullopt, std::nullopt, log) == kExitOk);
    CHECK(read_file(dir / "a" / "rewards.csv") == read_file(dir / "b" / "rewards.csv"));
    CHECK(read_file(dir / "a" / "agents" / "agent_000.qnet") ==
          read_file(dir / "b" / "agents" / "agent_000.qnet"));

    // A different seed produces a different run.
    CHECK(cmd_train(scenario, dir / "c", 99, std::nullopt, log) == kExitOk);
    CHECK(read_file(dir / "a" / "rewards.csv") != read_file(dir / "c" / "rewards.csv"));
}

TEST_CASE("cmd_train rejects malformed scenarios with a usage error") {
    const auto dir = temp_dir("cmd_train_bad");
    const auto scenario = write_file(dir / "scenario.ini", "[topology]\nrows = zero\n");
    std::ostringstream log;
    CHECK(cmd_train(scenario, dir / "out", std::nullopt, std::nullopt, log) == kExitUsage);
    CHECK(log.str().find("line 2") != std::string::npos);
    CHECK(log.str().find("rows") != std::string::npos);

    std::ostringstream log2;
    CHECK(cmd_train(dir / "missing.ini", dir / "out", std::nullopt, std::nullopt, log2) ==
          kExitUsage);
}

TEST_CASE("cmd_compare emits one row per ordered pair") {
    const auto dir = temp_dir("cmd_compare");
    const auto scenario = write_file(dir / "scenario.ini", kTinyScenario);
    std::ostringstream log;
    REQUIRE(cmd_train(scenario, dir / "out", std::nullopt, std::nullopt, log) == kExitOk);
    CHECK(cmd_compare(scenario, dir / "out" / "agents", dir / "cmp", log) == kExitOk);

    const std::string csv = read_file(dir / "cmp" / "comparison.csv");
    CHECK(count_lines(csv) == 1 + 12 * 11);
    CHECK(csv.rfind("src,dst,rl_hops,rl_maxload,rl_arrived,spf_hops,spf_maxload\n", 0) == 0);

    const std::string summary = read_file(dir / "cmp" / "summary.json");
    CHECK(summary.find("share_rl_fewer_hops") != std::string::npos);
    CHECK(summary.find("share_rl_high_load") != std::string::npos);

    // Identical invocations produce identical bytes.
    CHECK(cmd_compare(scenario, dir / "out" / "agents", dir / "cmp2", log) == kExitOk);
    CHECK(read_file(dir / "cmp2" / "comparison.csv") == csv);
}

TEST_CASE("cmd_compare rejects checkpoints from another topology") {
    const auto dir = temp_dir("cmd_compare_mismatch");
    const auto scenario = write_file(dir / "scenario.ini", kTinyScenario);
    std::ostringstream log;
    REQUIRE(cmd_train(scenario, dir / "out", std::nullopt, std::nullopt, log) == kExitOk);

    const auto other = write_file(dir / "other.ini",
                                  std::string("[topology]\nrows = 4\ncols = 6\n") +
                                      "[training]\ndest = 23\n");
    std::ostringstream log2;
    CHECK(cmd_compare(other, dir / "out" / "agents", dir / "cmp", log2) == kExitUsage);
    CHECK(log2.str().find("does not match") != std::string::npos);
}

TEST_CASE("cmd_baseline prints the route") {
    const auto dir = temp_dir("cmd_baseline");
    const auto scenario = write_file(dir / "scenario.ini", "");
    std::ostringstream out, log;
    CHECK(cmd_baseline(scenario, 0, 1, out, log) == kExitOk);
    CHECK(out.str().find("path: 0 1\n") != std::string::npos);
    CHECK(out.str().find("hops: 1") != std::string::npos);
    CHECK(out.str().find("feasible: yes") != std::string::npos);

    std::ostringstream out2, log2;
    CHECK(cmd_baseline(scenario, 3, 3, out2, log2) == kExitUsage);
    std::ostringstream out3, log3;
    CHECK(cmd_baseline(scenario, 0, 99, out3, log3) == kExitUsage);
}

TEST_CASE("explicit link loads pin the baseline route") {
    const auto dir = temp_dir("cmd_baseline_pinned");
    // 2x3 cluster with a hot top row; the detour is forced.
    const auto scenario = write_file(dir / "scenario.ini", R"(
[topology]
rows = 2
cols = 3

[loads]
hotspot_fraction = 0
link = 2 right 0.9

[training]
dest = 5
)");
    std::ostringstream out, log;
    CHECK(cmd_baseline(scenario, 2, 4, out, log) == kExitOk);
    CHECK(out.str().find("path: 2 3 5 4\n") != std::string::npos);
}
