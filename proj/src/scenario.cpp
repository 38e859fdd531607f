#include "satrl/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace satrl {

Topology Scenario::topology() const {
    return build_grid(rows, cols, wrap);
}

LinkLoadMap Scenario::loads() const {
    const Topology topo = topology();
    LinkLoadMap map = random_loads(topo, load_seed, hotspot_fraction, hotspot_boost);
    for (const auto& [node, dir, load] : explicit_loads) {
        if (!topo.valid_node(node) || !neighbor(topo, node, dir))
            throw std::invalid_argument("scenario: explicit load on a missing link");
        map.set(node, dir, load);
    }
    return map;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Parser {
    int line_no = 0;
    std::string key;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ScenarioError(line_no, key, msg);
    }

    double number(const std::string& value) const {
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &consumed);
        } catch (const std::exception&) {
            fail("expected a number, got '" + value + "'");
        }
        if (consumed != value.size())
            fail("trailing characters after number in '" + value + "'");
        return v;
    }

    long long integer(const std::string& value) const {
        const double v = number(value);
        const long long i = static_cast<long long>(v);
        if (static_cast<double>(i) != v)
            fail("expected an integer, got '" + value + "'");
        return i;
    }

    bool boolean(const std::string& value) const {
        const std::string v = lower(value);
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        fail("expected a boolean, got '" + value + "'");
    }
};

} // namespace

Scenario parse_scenario_text(const std::string& text) {
    Scenario sc;
    Parser p;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    bool epsilon_decay_set = false;

    while (std::getline(in, raw)) {
        ++p.line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            p.key.clear();
            if (line.back() != ']')
                p.fail("unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section != "topology" && section != "loads" && section != "reward" &&
                section != "training" && section != "eval")
                p.fail("unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            p.key.clear();
            p.fail("expected key = value");
        }
        p.key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (p.key.empty())
            p.fail("empty key");
        if (section.empty())
            p.fail("key before any [section]");

        if (section == "topology") {
            if (p.key == "rows") sc.rows = static_cast<int>(p.integer(value));
            else if (p.key == "cols") sc.cols = static_cast<int>(p.integer(value));
            else if (p.key == "wrap") sc.wrap = p.boolean(value);
            else p.fail("unknown topology key");
        } else if (section == "loads") {
            if (p.key == "seed") sc.load_seed = static_cast<std::uint64_t>(p.integer(value));
            else if (p.key == "hotspot_fraction") sc.hotspot_fraction = p.number(value);
            else if (p.key == "hotspot_boost") sc.hotspot_boost = p.number(value);
            else if (p.key == "link") {
                std::istringstream lv(value);
                std::string node_s, dir_s, load_s;
                if (!(lv >> node_s >> dir_s >> load_s))
                    p.fail("expected 'link = NODE DIRECTION LOAD'");
                std::string extra;
                if (lv >> extra)
                    p.fail("trailing tokens after link triple");
                auto dir = direction_from_string(dir_s);
                if (!dir)
                    p.fail("unknown direction '" + dir_s + "'");
                sc.explicit_loads.emplace_back(static_cast<int>(p.integer(node_s)), *dir,
                                               p.number(load_s));
            } else p.fail("unknown loads key");
        } else if (section == "reward") {
            RewardConfig& r = sc.reward;
            if (p.key == "psi") r.psi = p.number(value);
            else if (p.key == "big_psi") r.Psi = p.number(value);
            else if (p.key == "xi1") r.xi1 = p.number(value);
            else if (p.key == "xi2") r.xi2 = p.number(value);
            else if (p.key == "xi3") r.xi3 = p.number(value);
            else if (p.key == "big_xi") r.Xi = p.number(value);
            else if (p.key == "low_threshold") r.low_threshold = p.number(value);
            else if (p.key == "high_threshold") r.high_threshold = p.number(value);
            else p.fail("unknown reward key");
        } else if (section == "training") {
            TrainingRunConfig& t = sc.training;
            if (p.key == "episodes") t.episodes = static_cast<int>(p.integer(value));
            else if (p.key == "gamma") t.hyper.gamma = p.number(value);
            else if (p.key == "learning_rate") t.hyper.learning_rate = p.number(value);
            else if (p.key == "epsilon_start") t.epsilon.start = p.number(value);
            else if (p.key == "epsilon_end") t.epsilon.end = p.number(value);
            else if (p.key == "epsilon_decay") { t.epsilon.decay = p.number(value); epsilon_decay_set = true; }
            else if (p.key == "batch") t.hyper.batch_size = static_cast<int>(p.integer(value));
            else if (p.key == "buffer") t.hyper.buffer_capacity = static_cast<int>(p.integer(value));
            else if (p.key == "target_interval") t.hyper.target_interval = static_cast<int>(p.integer(value));
            else if (p.key == "warmup") t.hyper.warmup = static_cast<int>(p.integer(value));
            else if (p.key == "hidden") {
                std::istringstream hv(value);
                std::vector<int> hidden;
                std::string tok;
                while (hv >> tok) hidden.push_back(static_cast<int>(p.integer(tok)));
                if (hidden.empty())
                    p.fail("hidden needs at least one layer size");
                t.hyper.hidden = hidden;
            } else if (p.key == "pair_mode") {
                const std::string v = lower(value);
                if (v == "fixed") t.pair_mode = PairMode::Fixed;
                else if (v == "uniform") t.pair_mode = PairMode::Uniform;
                else p.fail("pair_mode must be 'fixed' or 'uniform'");
            } else if (p.key == "source") t.source = static_cast<int>(p.integer(value));
            else if (p.key == "dest") t.dest = static_cast<int>(p.integer(value));
            else if (p.key == "dynamic_evolution") t.dynamic_evolution = p.boolean(value);
            else if (p.key == "hop_limit") t.hop_limit = static_cast<int>(p.integer(value));
            else if (p.key == "seed") t.seed = static_cast<std::uint64_t>(p.integer(value));
            else p.fail("unknown training key");
        } else if (section == "eval") {
            if (p.key == "window") sc.smooth_window = static_cast<int>(p.integer(value));
            else if (p.key == "tolerance") sc.tolerance = p.number(value);
            else if (p.key == "sustain") sc.sustain = static_cast<int>(p.integer(value));
            else p.fail("unknown eval key");
        }
    }

    (void)epsilon_decay_set;
    p.line_no = 0;
    p.key.clear();

    // Validate eagerly so command-line users get scenario errors, not
    // mid-run failures.
    const Topology topo = sc.topology();
    sc.reward.validate();
    sc.training.hyper.validate();
    if (sc.training.pair_mode == PairMode::Fixed &&
        (!topo.valid_node(sc.training.source) || !topo.valid_node(sc.training.dest) ||
         sc.training.source == sc.training.dest))
        throw ScenarioError(0, "source", "fixed pair must name two distinct nodes");
    if (sc.smooth_window < 1)
        throw ScenarioError(0, "window", "smoothing window must be at least 1");
    if (sc.sustain < 1)
        throw ScenarioError(0, "sustain", "sustain must be at least 1");
    for (const auto& [node, dir, load] : sc.explicit_loads) {
        if (load < 0.0 || load > 1.0)
            throw ScenarioError(0, "link", "explicit load outside [0, 1]");
        (void)node;
        (void)dir;
    }
    return sc;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str());
}

} // namespace satrl
