#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "satrl/environment.hpp"
#include "satrl/rng.hpp"

namespace satrl {

/// Feedforward Q-function approximator: rectifier hidden layers, identity
/// output, one Q-value per Direction. Parameters are plain Eigen matrices
/// so copies are deep and the network is a value type.
struct QNetwork {
    std::vector<int> layout;                // e.g. {11, 64, 64, 4}
    std::vector<Eigen::MatrixXd> weights;   // weights[l]: layout[l+1] x layout[l]
    std::vector<Eigen::VectorXd> biases;    // biases[l]: layout[l+1]

    int input_dim() const { return layout.front(); }
    int output_dim() const { return layout.back(); }
    int parameter_count() const;
    bool parameters_finite() const;

    Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
    /// Columns are samples.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;
};

/// Fresh network for the routing observation/action convention
/// (input 11, output 4). Weights are uniform in +-1/sqrt(fan_in),
/// biases zero; identical seeds give identical parameters.
QNetwork init_network(const std::vector<int>& layout, std::uint64_t seed);

/// Q-values of one observation.
Eigen::Vector4d forward(const QNetwork& net, const Observation& obs);

/// Bootstrap target: reward for terminal transitions, otherwise
/// reward + gamma * max over valid next actions.
double td_target(double reward, bool terminal, const Eigen::Vector4d& next_q,
                 const std::array<bool, 4>& next_mask, double gamma);

/// One training example: only the taken action's output is regressed.
struct TrainSample {
    Observation obs;
    int action;
    double target;
};

/// One plain-SGD step on 0.5 * mean squared TD error over the batch.
/// Returns the pre-update loss. Non-finite gradients abort the step.
double train_batch(QNetwork& net, std::span<const TrainSample> batch,
                   double learning_rate);

/// Deep, independent copy used as the bootstrap target network.
QNetwork sync_target(const QNetwork& net);

/// Binary checkpoint: "SQN1", u32 layer count, u32 sizes, then per layer
/// the weight matrix (row-major) and bias vector as little-endian f64.
void save_network(const std::filesystem::path& path, const QNetwork& net);
QNetwork load_network(const std::filesystem::path& path);

/// One stored experience. next_agent names the node whose target network
/// values the successor state; next-state fields are unused when terminal.
struct Transition {
    Observation obs;
    Direction action;
    double reward;
    Observation next_obs;
    std::array<bool, 4> next_mask;
    int next_agent;
    bool terminal;
};

/// Bounded FIFO of transitions with seeded uniform sampling.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, std::uint64_t seed)
        : capacity_(capacity), rng_(seed) {}

    void push(Transition t);
    std::vector<const Transition*> sample(std::size_t batch);

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return items_[i]; }

private:
    std::deque<Transition> items_;
    std::size_t capacity_;
    Rng rng_;
};

} // namespace satrl
