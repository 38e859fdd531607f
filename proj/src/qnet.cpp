#include "satrl/qnet.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace satrl {

int QNetwork::parameter_count() const {
    int count = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        count += static_cast<int>(weights[l].size() + biases[l].size());
    return count;
}

bool QNetwork::parameters_finite() const {
    for (std::size_t l = 0; l < weights.size(); ++l)
        if (!weights[l].allFinite() || !biases[l].allFinite())
            return false;
    return true;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& input) const {
    if (input.size() != input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");
    Eigen::VectorXd a = input;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        a = weights[l] * a + biases[l];
        if (l + 1 < weights.size())
            a = a.cwiseMax(0.0);
    }
    return a;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
    if (inputs.rows() != input_dim())
        throw std::invalid_argument("forward_batch: input dimension mismatch");
    Eigen::MatrixXd a = inputs;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        a = (weights[l] * a).colwise() + biases[l];
        if (l + 1 < weights.size())
            a = a.cwiseMax(0.0);
    }
    return a;
}

QNetwork init_network(const std::vector<int>& layout, std::uint64_t seed) {
    if (layout.size() < 2)
        throw std::invalid_argument("init_network: layout needs at least two layers");
    if (layout.front() != kObservationDim || layout.back() != kNumDirections)
        throw std::invalid_argument("init_network: layout must run from 11 inputs to 4 outputs");
    for (int s : layout)
        if (s < 1)
            throw std::invalid_argument("init_network: layer sizes must be positive");

    QNetwork net;
    net.layout = layout;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layout.size(); ++l) {
        const int fan_in = layout[l];
        const int fan_out = layout[l + 1];
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c)
                w(r, c) = rng.uniform(-scale, scale);
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return net;
}

Eigen::Vector4d forward(const QNetwork& net, const Observation& obs) {
    return net.forward(obs);
}

double td_target(double reward, bool terminal, const Eigen::Vector4d& next_q,
                 const std::array<bool, 4>& next_mask, double gamma) {
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("td_target: gamma must lie in [0, 1)");
    if (terminal)
        return reward;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < 4; ++a)
        if (next_mask[static_cast<std::size_t>(a)])
            best = std::max(best, next_q[a]);
    if (!std::isfinite(best))
        throw std::invalid_argument("td_target: no valid next action");
    return reward + gamma * best;
}

double train_batch(QNetwork& net, std::span<const TrainSample> batch,
                   double learning_rate) {
    if (batch.empty())
        throw std::invalid_argument("train_batch: empty batch");
    const int input_dim = net.input_dim();
    const int batch_size = static_cast<int>(batch.size());
    const std::size_t num_layers = net.weights.size();

    Eigen::MatrixXd inputs(input_dim, batch_size);
    for (int b = 0; b < batch_size; ++b) {
        if (!std::isfinite(batch[static_cast<std::size_t>(b)].target))
            throw std::invalid_argument("train_batch: non-finite target");
        inputs.col(b) = batch[static_cast<std::size_t>(b)].obs;
    }

    // Forward pass keeping post-activation values per layer.
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(num_layers + 1);
    activations.push_back(inputs);
    for (std::size_t l = 0; l < num_layers; ++l) {
        Eigen::MatrixXd z = (net.weights[l] * activations.back()).colwise() + net.biases[l];
        if (l + 1 < num_layers)
            z = z.cwiseMax(0.0);
        activations.push_back(std::move(z));
    }
    const Eigen::MatrixXd& q = activations.back();

    // Loss 0.5/B * sum_b (q[a_b] - t_b)^2; only the taken action's output
    // carries gradient.
    double loss = 0.0;
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    for (int b = 0; b < batch_size; ++b) {
        const TrainSample& s = batch[static_cast<std::size_t>(b)];
        const double err = q(s.action, b) - s.target;
        loss += 0.5 * err * err;
        delta(s.action, b) = err / batch_size;
    }
    loss /= batch_size;

    std::vector<Eigen::MatrixXd> grad_w(num_layers);
    std::vector<Eigen::VectorXd> grad_b(num_layers);
    for (std::size_t l = num_layers; l-- > 0;) {
        grad_w[l] = delta * activations[l].transpose();
        grad_b[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = net.weights[l].transpose() * delta;
            // Rectifier derivative: active exactly where the forward
            // output was positive.
            delta = delta.cwiseProduct(
                (activations[l].array() > 0.0).cast<double>().matrix());
        }
        if (!grad_w[l].allFinite() || !grad_b[l].allFinite())
            throw std::runtime_error("train_batch: non-finite gradient, step aborted");
    }

    for (std::size_t l = 0; l < num_layers; ++l) {
        net.weights[l] -= learning_rate * grad_w[l];
        net.biases[l] -= learning_rate * grad_b[l];
    }
    return loss;
}

QNetwork sync_target(const QNetwork& net) {
    return net;
}

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

constexpr char kMagic[4] = {'S', 'Q', 'N', '1'};

} // namespace

void save_network(const std::filesystem::path& path, const QNetwork& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_network: cannot open " + path.string());
    out.write(kMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(net.layout.size()));
    for (int s : net.layout)
        write_u32(out, static_cast<std::uint32_t>(s));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Eigen::MatrixXd& w = net.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                write_f64(out, w(r, c));
        for (Eigen::Index i = 0; i < net.biases[l].size(); ++i)
            write_f64(out, net.biases[l][i]);
    }
    if (!out)
        throw std::runtime_error("save_network: write failed for " + path.string());
}

QNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_network: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_network: bad magic in " + path.string());
    const std::uint32_t layers = read_u32(in);
    if (layers < 2 || layers > 64)
        throw std::runtime_error("load_network: implausible layer count");
    QNetwork net;
    net.layout.resize(layers);
    for (std::uint32_t i = 0; i < layers; ++i)
        net.layout[i] = static_cast<int>(read_u32(in));
    for (std::uint32_t l = 0; l + 1 < layers; ++l) {
        Eigen::MatrixXd w(net.layout[l + 1], net.layout[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = read_f64(in);
        Eigen::VectorXd b(net.layout[l + 1]);
        for (Eigen::Index i = 0; i < b.size(); ++i)
            b[i] = read_f64(in);
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    if (!in)
        throw std::runtime_error("load_network: truncated file " + path.string());
    return net;
}

void ReplayBuffer::push(Transition t) {
    items_.push_back(std::move(t));
    if (items_.size() > capacity_)
        items_.pop_front();
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch) {
    if (items_.size() < batch)
        throw std::logic_error("ReplayBuffer::sample: not enough stored transitions");
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
        out.push_back(&items_[rng_.integer(items_.size())]);
    return out;
}

} // namespace satrl
