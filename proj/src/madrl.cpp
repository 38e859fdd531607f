#include "satrl/madrl.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "satrl/metrics.hpp"

namespace satrl {

std::vector<int> Hyperparameters::layout() const {
    std::vector<int> l;
    l.push_back(kObservationDim);
    l.insert(l.end(), hidden.begin(), hidden.end());
    l.push_back(kNumDirections);
    return l;
}

void Hyperparameters::validate() const {
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("Hyperparameters: gamma must lie in [0, 1)");
    if (learning_rate <= 0.0)
        throw std::invalid_argument("Hyperparameters: learning_rate must be positive");
    if (batch_size < 1 || buffer_capacity < batch_size || warmup < batch_size)
        throw std::invalid_argument("Hyperparameters: need warmup >= batch <= capacity");
    if (target_interval < 1)
        throw std::invalid_argument("Hyperparameters: target_interval must be positive");
}

AgentSet make_agents(const Topology& topo, const Hyperparameters& hyper,
                     std::uint64_t seed) {
    hyper.validate();
    AgentSet set{topo, hyper, {}};
    set.agents.reserve(static_cast<std::size_t>(topo.node_count()));
    const std::vector<int> layout = hyper.layout();
    for (int node = 0; node < topo.node_count(); ++node) {
        QNetwork online = init_network(layout, derive_seed(seed, 1000 + static_cast<std::uint64_t>(node)));
        QNetwork target = sync_target(online);
        ReplayBuffer buffer(static_cast<std::size_t>(hyper.buffer_capacity),
                            derive_seed(seed, 2000 + static_cast<std::uint64_t>(node)));
        set.agents.push_back(Agent{std::move(online), std::move(target), std::move(buffer), 0});
    }
    return set;
}

double EpsilonSchedule::default_decay(double start, int episodes) {
    if (episodes <= 0 || start <= 0.0)
        return 1.0;
    const double milestone = 0.6 * episodes;
    if (milestone < 1.0 || start <= 0.1)
        return 1.0;
    return std::pow(0.1 / start, 1.0 / milestone);
}

double EpsilonSchedule::at(int episode, int episodes) const {
    const double d = decay > 0.0 ? decay : default_decay(start, episodes);
    return std::max(end, start * std::pow(d, static_cast<double>(episode)));
}

Direction select_action(const QNetwork& net, const Observation& obs,
                        double epsilon, const std::array<bool, 4>& mask,
                        Rng& rng) {
    int valid = 0;
    for (bool m : mask) valid += m ? 1 : 0;
    if (valid == 0)
        throw std::invalid_argument("select_action: no valid action");

    if (epsilon > 0.0 && rng.uniform() < epsilon) {
        auto pick = static_cast<int>(rng.integer(static_cast<std::uint64_t>(valid)));
        for (int a = 0; a < 4; ++a) {
            if (!mask[static_cast<std::size_t>(a)])
                continue;
            if (pick-- == 0)
                return static_cast<Direction>(a);
        }
    }

    Eigen::Vector4d q = forward(net, obs);
    int best = -1;
    for (int a = 0; a < 4; ++a) {
        if (!mask[static_cast<std::size_t>(a)])
            continue;
        if (best < 0 || q[a] > q[best])
            best = a;
    }
    return static_cast<Direction>(best);
}

namespace {

// One SGD step for the acting agent from its own buffer. Targets
// bootstrap through the next hop's target network.
void learn_step(AgentSet& agents, Agent& acting) {
    const Hyperparameters& hp = agents.hyper;
    if (acting.buffer.size() < static_cast<std::size_t>(hp.warmup))
        return;
    std::vector<const Transition*> batch =
        acting.buffer.sample(static_cast<std::size_t>(hp.batch_size));
    std::vector<TrainSample> samples;
    samples.reserve(batch.size());
    for (const Transition* t : batch) {
        double target;
        if (t->terminal) {
            target = t->reward;
        } else {
            const QNetwork& next_net =
                agents.agents[static_cast<std::size_t>(t->next_agent)].target;
            target = td_target(t->reward, false, forward(next_net, t->next_obs),
                               t->next_mask, hp.gamma);
        }
        samples.push_back(TrainSample{t->obs, static_cast<int>(t->action), target});
    }
    train_batch(acting.online, samples, hp.learning_rate);
    ++acting.train_steps;
    if (acting.train_steps % hp.target_interval == 0) {
        acting.target = sync_target(acting.online);
        if (!acting.target.parameters_finite())
            throw std::runtime_error("train: non-finite parameters at target sync");
    }
}

} // namespace

EpisodeResult run_episode(AgentSet& agents, Environment& env, double epsilon,
                          bool learn, Rng& rng) {
    EpisodeResult result;
    Observation obs = env.observation();
    while (env.live()) {
        const int node = env.current_node();
        Agent& acting = agents.agents[static_cast<std::size_t>(node)];
        const std::array<bool, 4> mask = env.valid_actions();
        const Direction action = select_action(acting.online, obs, epsilon, mask, rng);
        Environment::StepResult sr = env.step(action);

        Transition t;
        t.obs = obs;
        t.action = action;
        t.reward = sr.reward;
        t.next_obs = sr.next_obs;
        t.next_mask = action_mask(env.topology(), sr.next_node);
        t.next_agent = sr.next_node;
        // Hop-limit truncation is not a real terminal state: the value of
        // the successor still counts, so only arrival and drops cut the
        // bootstrap.
        t.terminal = sr.terminal == TerminalKind::Arrived ||
                     sr.terminal == TerminalKind::Dropped;

        result.transitions.emplace_back(node, t);
        acting.buffer.push(t);
        if (learn)
            learn_step(agents, acting);

        obs = sr.next_obs;
    }
    result.trace = env.trace();
    return result;
}

TrainResult train(const Topology& topo, const LinkLoadMap& loads,
                  const TrainingRunConfig& config, const RewardConfig& rewards) {
    rewards.validate();
    if (config.episodes < 0)
        throw std::invalid_argument("train: negative episode count");
    if (config.pair_mode == PairMode::Fixed) {
        if (!topo.valid_node(config.source) || !topo.valid_node(config.dest) ||
            config.source == config.dest)
            throw std::invalid_argument("train: invalid fixed source/destination pair");
    }

    TrainResult result{make_agents(topo, config.hyper, config.seed), {}};
    result.history.reserve(static_cast<std::size_t>(config.episodes));

    Rng explore_rng(derive_seed(config.seed, 1));
    Rng pair_rng(derive_seed(config.seed, 2));

    EpisodeTrace previous;
    for (int episode = 0; episode < config.episodes; ++episode) {
        LinkLoadMap episode_loads =
            (config.dynamic_evolution && episode > 0)
                ? evolve_loads(loads, previous)
                : loads;

        int source = config.source;
        int dest = config.dest;
        if (config.pair_mode == PairMode::Uniform) {
            source = static_cast<int>(pair_rng.integer(static_cast<std::uint64_t>(topo.node_count())));
            dest = static_cast<int>(pair_rng.integer(static_cast<std::uint64_t>(topo.node_count() - 1)));
            if (dest >= source)
                ++dest;
        }

        Environment env(topo, std::move(episode_loads), rewards, config.hop_limit);
        env.reset(source, dest);
        const double eps = config.epsilon.at(episode, config.episodes);
        EpisodeResult er = run_episode(result.agents, env, eps, true, explore_rng);
        previous = er.trace;

        result.history.push_back(EpisodeRecord{
            er.trace.total_reward(), er.trace.outcome(), er.trace.hops(),
            er.trace.max_link_load()});
    }
    return result;
}

RouteResult greedy_route(const AgentSet& agents, const Topology& topo,
                         const LinkLoadMap& loads, int source, int dest,
                         const RewardConfig& rewards, int hop_limit) {
    Environment env(topo, loads, rewards, hop_limit);
    Observation obs = env.reset(source, dest);
    Rng unused(0);  // epsilon 0 never draws

    RouteResult result;
    result.path.push_back(source);
    while (env.live()) {
        const Agent& acting = agents.agents[static_cast<std::size_t>(env.current_node())];
        const Direction action =
            select_action(acting.online, obs, 0.0, env.valid_actions(), unused);
        Environment::StepResult sr = env.step(action);
        result.path.push_back(sr.next_node);
        obs = sr.next_obs;
    }
    result.outcome = summarize(env.trace());
    return result;
}

namespace {

std::string agent_filename(int node) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "agent_%03d.qnet", node);
    return buf;
}

} // namespace

void save_agents(const std::filesystem::path& dir, const AgentSet& agents) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest)
        throw std::runtime_error("save_agents: cannot write manifest in " + dir.string());
    manifest << "rows = " << agents.topo.rows << "\n";
    manifest << "cols = " << agents.topo.cols << "\n";
    manifest << "wrap = " << (agents.topo.wrap ? 1 : 0) << "\n";
    manifest << "nodes = " << agents.topo.node_count() << "\n";
    manifest << "layout =";
    for (int s : agents.hyper.layout()) manifest << ' ' << s;
    manifest << "\n";
    for (int node = 0; node < agents.topo.node_count(); ++node) {
        const std::string name = agent_filename(node);
        manifest << "file " << node << " = " << name << "\n";
        save_network(dir / name, agents.agents[static_cast<std::size_t>(node)].online);
    }
}

AgentSet load_agents(const std::filesystem::path& dir) {
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest)
        throw std::runtime_error("load_agents: no manifest in " + dir.string());
    int rows = 0, cols = 0, wrap = 0, nodes = 0;
    std::vector<int> layout;
    std::vector<std::string> files;
    std::string line;
    while (std::getline(manifest, line)) {
        std::istringstream in(line);
        std::string key, eq;
        in >> key;
        if (key == "rows") in >> eq >> rows;
        else if (key == "cols") in >> eq >> cols;
        else if (key == "wrap") in >> eq >> wrap;
        else if (key == "nodes") in >> eq >> nodes;
        else if (key == "layout") {
            in >> eq;
            int v;
            while (in >> v) layout.push_back(v);
        } else if (key == "file") {
            int idx;
            std::string name;
            in >> idx >> eq >> name;
            files.resize(std::max<std::size_t>(files.size(), static_cast<std::size_t>(idx) + 1));
            files[static_cast<std::size_t>(idx)] = name;
        }
    }
    if (rows < 2 || cols < 2 || nodes != rows * cols ||
        files.size() != static_cast<std::size_t>(nodes) || layout.size() < 2)
        throw std::runtime_error("load_agents: malformed manifest in " + dir.string());

    Topology topo = build_grid(rows, cols, wrap != 0);
    Hyperparameters hyper;
    hyper.hidden.assign(layout.begin() + 1, layout.end() - 1);

    AgentSet set{topo, hyper, {}};
    for (int node = 0; node < nodes; ++node) {
        QNetwork online = load_network(dir / files[static_cast<std::size_t>(node)]);
        if (online.layout != layout)
            throw std::runtime_error("load_agents: checkpoint layout mismatch for node " +
                                     std::to_string(node));
        QNetwork target = sync_target(online);
        set.agents.push_back(Agent{std::move(online), std::move(target),
                                   ReplayBuffer(static_cast<std::size_t>(hyper.buffer_capacity), 0), 0});
    }
    return set;
}

void write_history_csv(const std::filesystem::path& path,
                       const RewardHistory& history, int smooth_window) {
    std::vector<double> totals;
    totals.reserve(history.size());
    for (const EpisodeRecord& r : history) totals.push_back(r.total_reward);
    const std::vector<double> smoothed = smooth(totals, smooth_window);

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_history_csv: cannot open " + path.string());
    out << "episode,total_reward,smoothed_reward,hops,max_load,outcome\n";
    char buf[160];
    for (std::size_t i = 0; i < history.size(); ++i) {
        const EpisodeRecord& r = history[i];
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%d,%.10g,%s\n", i,
                      r.total_reward, smoothed[i], r.hops, r.max_link_load,
                      to_string(r.outcome));
        out << buf;
    }
}

} // namespace satrl
