#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "satrl/qnet.hpp"
#include "satrl/rng.hpp"

using namespace satrl;

namespace {

// Independent nested-loop forward pass used as the oracle.
std::vector<double> naive_forward(const QNetwork& net, const std::vector<double>& input) {
    std::vector<double> a = input;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto& w = net.weights[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows()), 0.0);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            double sum = net.biases[l][r];
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                sum += w(r, c) * a[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = sum;
        }
        if (l + 1 < net.weights.size())
            for (double& v : next) v = std::max(v, 0.0);
        a = std::move(next);
    }
    return a;
}

Observation random_obs(Rng& rng) {
    Observation obs;
    for (int i = 0; i < kObservationDim; ++i)
        obs[i] = rng.uniform(-1.0, 1.0);
    return obs;
}

double sample_loss(const QNetwork& net, const TrainSample& s) {
    const Eigen::VectorXd q = net.forward(s.obs);
    const double err = q[s.action] - s.target;
    return 0.5 * err * err;
}

// Flat view over all parameters, in layer order.
double& param_ref(QNetwork& net, int flat) {
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const int wsize = static_cast<int>(net.weights[l].size());
        if (flat < wsize) return net.weights[l].data()[flat];
        flat -= wsize;
        const int bsize = static_cast<int>(net.biases[l].size());
        if (flat < bsize) return net.biases[l].data()[flat];
        flat -= bsize;
    }
    throw std::out_of_range("param_ref");
}

} // namespace

TEST_CASE("init_network is deterministic per seed and validates layouts") {
    const std::vector<int> layout{11, 8, 4};
    const QNetwork a = init_network(layout, 99);
    const QNetwork b = init_network(layout, 99);
    const QNetwork c = init_network(layout, 100);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        CHECK(a.weights[l] == b.weights[l]);
        CHECK(a.biases[l] == b.biases[l]);
        CHECK(a.biases[l].isZero());
    }
    CHECK(a.weights[0] != c.weights[0]);

    // Weight scale follows 1/sqrt(fan_in).
    CHECK(a.weights[0].cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(11.0));

    CHECK_THROWS_AS(init_network({10, 4}, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_network({11, 5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_network({11}, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_network({11, 0, 4}, 1), std::invalid_argument);
}

TEST_CASE("parameter count for the default layout") {
    const QNetwork net = init_network({11, 64, 64, 4}, 1);
    CHECK(net.parameter_count() == 5188);
}

TEST_CASE("zero parameters give zero output") {
    QNetwork net = init_network({11, 8, 4}, 1);
    for (auto& w : net.weights) w.setZero();
    Rng rng(5);
    const Eigen::Vector4d q = forward(net, random_obs(rng));
    CHECK(q.isZero());
}

TEST_CASE("single identity layer passes input through") {
    QNetwork net;
    net.layout = {3, 3};
    net.weights.push_back(Eigen::MatrixXd::Identity(3, 3));
    net.biases.push_back(Eigen::VectorXd::Zero(3));
    Eigen::VectorXd x(3);
    x << 0.7, -1.2, 3.4;
    CHECK(net.forward(x) == x);
}

TEST_CASE("forward matches the nested-loop oracle") {
    Rng rng(17);
    for (const auto& layout :
         {std::vector<int>{11, 4}, {11, 8, 4}, {11, 8, 8, 4}, {11, 64, 64, 4}}) {
        const QNetwork net = init_network(layout, rng.raw());
        for (int probe = 0; probe < 10; ++probe) {
            const Observation obs = random_obs(rng);
            const Eigen::Vector4d q = forward(net, obs);
            const std::vector<double> expected =
                naive_forward(net, {obs.data(), obs.data() + kObservationDim});
            for (int i = 0; i < 4; ++i)
                CHECK(std::abs(q[i] - expected[static_cast<std::size_t>(i)]) < 1e-10);
        }
    }
}

TEST_CASE("forward rejects dimension mismatches") {
    const QNetwork net = init_network({11, 8, 4}, 1);
    CHECK_THROWS_AS(net.forward(Eigen::VectorXd::Zero(7)), std::invalid_argument);
}

TEST_CASE("td_target arithmetic") {
    const std::array<bool, 4> all{true, true, true, true};
    Eigen::Vector4d next_q;
    next_q << 2.0, 5.0, -1.0, 0.0;

    CHECK(td_target(11.0, true, next_q, all, 0.95) == 11.0);
    CHECK(td_target(-1.0, false, next_q, all, 0.95) == doctest::Approx(3.75));

    const std::array<bool, 4> masked{true, false, true, true};
    CHECK(td_target(-1.0, false, next_q, masked, 0.95) == doctest::Approx(0.9));

    const std::array<bool, 4> none{false, false, false, false};
    CHECK_THROWS_AS(td_target(0.0, false, next_q, none, 0.95), std::invalid_argument);
    CHECK(td_target(3.0, true, next_q, none, 0.95) == 3.0);  // mask unused when terminal
    CHECK_THROWS_AS(td_target(0.0, false, next_q, all, 1.0), std::invalid_argument);
}

TEST_CASE("train_batch with matching targets changes nothing") {
    QNetwork net = init_network({11, 8, 4}, 7);
    const QNetwork before = net;
    Rng rng(21);
    std::vector<TrainSample> batch;
    for (int i = 0; i < 8; ++i) {
        TrainSample s;
        s.obs = random_obs(rng);
        s.action = static_cast<int>(rng.integer(4));
        s.target = forward(net, s.obs)[s.action];
        batch.push_back(s);
    }
    const double loss = train_batch(net, batch, 0.01);
    CHECK(loss == 0.0);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        CHECK(net.weights[l] == before.weights[l]);
        CHECK(net.biases[l] == before.biases[l]);
    }
}

TEST_CASE("repeated updates on one sample converge monotonically") {
    QNetwork net = init_network({11, 8, 8, 4}, 3);
    Rng rng(4);
    TrainSample s;
    s.obs = random_obs(rng);
    s.action = 2;
    s.target = 5.0;

    double prev_err = std::abs(forward(net, s.obs)[s.action] - s.target);
    for (int i = 0; i < 800; ++i) {
        train_batch(net, std::vector<TrainSample>{s}, 0.01);
        const double err = std::abs(forward(net, s.obs)[s.action] - s.target);
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 1e-3);
}

TEST_CASE("train_batch validates its batch") {
    QNetwork net = init_network({11, 8, 4}, 7);
    CHECK_THROWS_AS(train_batch(net, {}, 0.01), std::invalid_argument);
    TrainSample s;
    s.obs = Observation::Zero();
    s.action = 0;
    s.target = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(train_batch(net, std::vector<TrainSample>{s}, 0.01),
                    std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(2024);
    const std::vector<std::vector<int>> layouts{
        {11, 4}, {11, 8, 4}, {11, 8, 8, 4}};
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
        const auto& layout = layouts[static_cast<std::size_t>(probe) % layouts.size()];
        QNetwork net = init_network(layout, rng.raw());
        TrainSample s;
        s.obs = random_obs(rng);
        s.action = static_cast<int>(rng.integer(4));
        s.target = rng.uniform(-10.0, 10.0);
        const std::vector<TrainSample> batch{s};

        // Learning rate 1 turns the SGD update into the gradient itself.
        QNetwork stepped = net;
        train_batch(stepped, batch, 1.0);

        const int params = net.parameter_count();
        const double eps = 1e-5;
        for (int p = 0; p < params; ++p) {
            QNetwork plus = net;
            QNetwork minus = net;
            param_ref(plus, p) += eps;
            param_ref(minus, p) -= eps;
            const double numeric =
                (sample_loss(plus, s) - sample_loss(minus, s)) / (2.0 * eps);
            const double analytic = param_ref(net, p) - param_ref(stepped, p);
            const double rel = std::abs(analytic - numeric) /
                               std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("sync_target yields an independent deep copy") {
    QNetwork net = init_network({11, 8, 4}, 12);
    QNetwork copy = sync_target(net);
    Rng rng(9);
    const Observation obs = random_obs(rng);
    CHECK(forward(net, obs) == forward(copy, obs));

    QNetwork copy2 = sync_target(net);
    for (std::size_t l = 0; l < copy.weights.size(); ++l)
        CHECK(copy.weights[l] == copy2.weights[l]);

    const Eigen::Vector4d before = forward(copy, obs);
    net.weights[0].setZero();
    CHECK(forward(copy, obs) == before);
    CHECK(forward(net, obs) != before);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
    const QNetwork net = init_network({11, 8, 8, 4}, 77);
    const auto path = std::filesystem::temp_directory_path() / "satrl_qnet_test.qnet";
    save_network(path, net);
    const QNetwork loaded = load_network(path);
    std::filesystem::remove(path);

    CHECK(loaded.layout == net.layout);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        CHECK(loaded.weights[l] == net.weights[l]);
        CHECK(loaded.biases[l] == net.biases[l]);
    }
    CHECK_THROWS_AS(load_network("/nonexistent/net.qnet"), std::runtime_error);
}

TEST_CASE("replay buffer is a bounded FIFO with seeded sampling") {
    ReplayBuffer buffer(50, 3);
    auto make = [](double reward) {
        Transition t;
        t.obs = Observation::Zero();
        t.action = Direction::Up;
        t.reward = reward;
        t.next_obs = Observation::Zero();
        t.next_mask = {true, true, true, true};
        t.next_agent = 0;
        t.terminal = false;
        return t;
    };

    for (int i = 0; i < 60; ++i) buffer.push(make(i));
    CHECK(buffer.size() == 50);
    // First ten evicted in arrival order.
    for (std::size_t i = 0; i < buffer.size(); ++i)
        CHECK(buffer.at(i).reward == doctest::Approx(10.0 + static_cast<double>(i)));

    auto batch = buffer.sample(32);
    CHECK(batch.size() == 32);
    for (const Transition* t : batch)
        CHECK((t->reward >= 10.0 && t->reward < 60.0));

    ReplayBuffer tiny(10, 1);
    tiny.push(make(0));
    CHECK_THROWS_AS(tiny.sample(2), std::logic_error);
}
