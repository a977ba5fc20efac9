#include "carlton/neural.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "carlton/errors.hpp"

namespace carlton {

using nlohmann::json;

double mellowmax(std::span<const double> values, double omega) {
    if (!(omega > 0.0)) throw DomainError("mellowmax: omega must be > 0");
    double top = -std::numeric_limits<double>::infinity();
    int finite = 0;
    for (double x : values)
        if (std::isfinite(x)) {
            top = std::max(top, x);
            ++finite;
        }
    if (finite == 0) throw DomainError("mellowmax: no finite entries");
    double sum = 0.0;
    for (double x : values)
        if (std::isfinite(x)) sum += std::exp(omega * (x - top));
    return top + std::log(sum / finite) / omega;
}

double huber(double e, double delta) {
    const double a = std::abs(e);
    return a <= delta ? 0.5 * e * e : delta * (a - 0.5 * delta);
}

double huber_derivative(double e, double delta) {
    return std::abs(e) <= delta ? e : (e > 0.0 ? delta : -delta);
}

// ---------------------------------------------------------------------------

struct ValueNetwork::Activations {
    int rows = 0;
    std::vector<double> input;
    std::vector<double> z[kLayers];
    std::vector<double> h[kLayers - 1];
};

ValueNetwork::ValueNetwork(MlpShape shape) : shape_(shape) {
    if (shape_.channels < 1 || shape_.hidden < 1)
        throw DomainError("ValueNetwork: channels and hidden width must be >= 1");
    const int dims[kLayers + 1] = {shape_.input_size(), shape_.hidden, shape_.hidden,
                                   shape_.hidden, shape_.channels};
    std::size_t offset = 0;
    for (int l = 0; l < kLayers; ++l) {
        Layout lay;
        lay.inputs = dims[l];
        lay.outputs = dims[l + 1];
        lay.weight_offset = offset;
        offset += static_cast<std::size_t>(lay.inputs) * lay.outputs;
        lay.bias_offset = offset;
        offset += static_cast<std::size_t>(lay.outputs);
        layout_.push_back(lay);
    }
    params_.assign(offset, 0.0);
    m_.assign(offset, 0.0);
    v_.assign(offset, 0.0);
}

int ValueNetwork::layer_inputs(int layer) const { return layout_.at(static_cast<std::size_t>(layer)).inputs; }
int ValueNetwork::layer_outputs(int layer) const { return layout_.at(static_cast<std::size_t>(layer)).outputs; }

std::span<double> ValueNetwork::weights(int layer) {
    const auto& l = layout_.at(static_cast<std::size_t>(layer));
    return std::span(params_).subspan(l.weight_offset, static_cast<std::size_t>(l.inputs) * l.outputs);
}
std::span<double> ValueNetwork::biases(int layer) {
    const auto& l = layout_.at(static_cast<std::size_t>(layer));
    return std::span(params_).subspan(l.bias_offset, static_cast<std::size_t>(l.outputs));
}
std::span<const double> ValueNetwork::weights(int layer) const {
    const auto& l = layout_.at(static_cast<std::size_t>(layer));
    return std::span(params_).subspan(l.weight_offset, static_cast<std::size_t>(l.inputs) * l.outputs);
}
std::span<const double> ValueNetwork::biases(int layer) const {
    const auto& l = layout_.at(static_cast<std::size_t>(layer));
    return std::span(params_).subspan(l.bias_offset, static_cast<std::size_t>(l.outputs));
}

void ValueNetwork::initialize(Rng& rng) {
    for (int l = 0; l < kLayers; ++l) {
        const auto& lay = layout_[static_cast<std::size_t>(l)];
        const double bound = std::sqrt(6.0 / (lay.inputs + lay.outputs));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& w : weights(l)) w = dist(rng);
        std::fill(biases(l).begin(), biases(l).end(), 0.0);
    }
    std::fill(m_.begin(), m_.end(), 0.0);
    std::fill(v_.begin(), v_.end(), 0.0);
    step_ = 0;
}

namespace {

// out(rows x n_out) = in(rows x n_in) * W^T + b
void dense(const double* in, int rows, int n_in, const double* w, const double* b, int n_out,
           double* out) {
    for (int r = 0; r < rows; ++r) {
        const double* x = in + static_cast<std::size_t>(r) * n_in;
        double* y = out + static_cast<std::size_t>(r) * n_out;
        for (int o = 0; o < n_out; ++o) {
            const double* wr = w + static_cast<std::size_t>(o) * n_in;
            double acc = b[o];
            for (int i = 0; i < n_in; ++i) acc += wr[i] * x[i];
            y[o] = acc;
        }
    }
}

} // namespace

void ValueNetwork::forward_impl(std::span<const double> states, int rows, Activations& act) const {
    const int in = shape_.input_size();
    if (rows < 0 || states.size() != static_cast<std::size_t>(rows) * in)
        throw DomainError("ValueNetwork: state length must be 2K per row");
    act.rows = rows;
    act.input.assign(states.begin(), states.end());
    const double slope = shape_.leaky_slope;

    const double* x = act.input.data();
    for (int l = 0; l < kLayers; ++l) {
        const auto& lay = layout_[static_cast<std::size_t>(l)];
        auto& z = act.z[l];
        z.resize(static_cast<std::size_t>(rows) * lay.outputs);
        dense(x, rows, lay.inputs, params_.data() + lay.weight_offset,
              params_.data() + lay.bias_offset, lay.outputs, z.data());
        if (l == kLayers - 1) break;

        auto& h = act.h[l];
        h.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) h[i] = z[i] > 0.0 ? z[i] : slope * z[i];
        if (l > 0)
            for (std::size_t i = 0; i < h.size(); ++i) h[i] += x[i];
        x = h.data();
    }
}

std::vector<double> ValueNetwork::forward(std::span<const double> state) const {
    return forward_batch(state, 1);
}

std::vector<double> ValueNetwork::forward_batch(std::span<const double> states, int rows) const {
    Activations act;
    forward_impl(states, rows, act);
    return std::move(act.z[kLayers - 1]);
}

std::vector<double> ValueNetwork::bootstrap_targets(const TrainBatch& batch, double gamma,
                                                    double omega) const {
    const auto q_next = forward_batch(batch.next_states, batch.size);
    const int k = shape_.channels;
    std::vector<double> targets(static_cast<std::size_t>(batch.size));
    for (int r = 0; r < batch.size; ++r) {
        std::span<const double> row(q_next.data() + static_cast<std::size_t>(r) * k,
                                    static_cast<std::size_t>(k));
        targets[static_cast<std::size_t>(r)] =
            batch.rewards[static_cast<std::size_t>(r)] + gamma * mellowmax(row, omega);
    }
    return targets;
}

double ValueNetwork::loss(const TrainBatch& batch, std::span<const double> targets,
                          double delta) const {
    const auto q = forward_batch(batch.states, batch.size);
    const int k = shape_.channels;
    double total = 0.0;
    for (int r = 0; r < batch.size; ++r) {
        const double pred = q[static_cast<std::size_t>(r) * k + batch.actions[static_cast<std::size_t>(r)]];
        total += huber(targets[static_cast<std::size_t>(r)] - pred, delta);
    }
    return total / batch.size;
}

double ValueNetwork::loss_and_gradient(const TrainBatch& batch, std::span<const double> targets,
                                       double delta, std::vector<double>& gradient) const {
    if (batch.size < 1) throw DomainError("loss_and_gradient: empty batch");
    if (static_cast<int>(targets.size()) != batch.size ||
        static_cast<int>(batch.actions.size()) != batch.size)
        throw DomainError("loss_and_gradient: batch/target size mismatch");

    Activations act;
    forward_impl(batch.states, batch.size, act);
    const int rows = batch.size;
    const int k = shape_.channels;
    const double slope = shape_.leaky_slope;

    gradient.assign(params_.size(), 0.0);

    // dL/dQ is nonzero only at the taken action.
    std::vector<double> dz(static_cast<std::size_t>(rows) * k, 0.0);
    double total = 0.0;
    for (int r = 0; r < rows; ++r) {
        const int a = batch.actions[static_cast<std::size_t>(r)];
        if (a < 0 || a >= k) throw DomainError("loss_and_gradient: action out of range");
        const double pred = act.z[kLayers - 1][static_cast<std::size_t>(r) * k + a];
        const double e = targets[static_cast<std::size_t>(r)] - pred;
        total += huber(e, delta);
        dz[static_cast<std::size_t>(r) * k + a] = -huber_derivative(e, delta) / rows;
    }

    // Walk back through the layers. `grad_h` holds dL/d(output of the layer
    // below the one being processed).
    std::vector<double> grad_h;
    for (int l = kLayers - 1; l >= 0; --l) {
        const auto& lay = layout_[static_cast<std::size_t>(l)];
        if (l < kLayers - 1) {
            const auto& z = act.z[l];
            dz.resize(z.size());
            for (std::size_t i = 0; i < z.size(); ++i)
                dz[i] = grad_h[i] * (z[i] > 0.0 ? 1.0 : slope);
        }

        const double* x = l == 0 ? act.input.data() : act.h[l - 1].data();
        const double* w = params_.data() + lay.weight_offset;
        double* gw = gradient.data() + lay.weight_offset;
        double* gb = gradient.data() + lay.bias_offset;
        for (int r = 0; r < rows; ++r) {
            const double* xr = x + static_cast<std::size_t>(r) * lay.inputs;
            const double* dzr = dz.data() + static_cast<std::size_t>(r) * lay.outputs;
            for (int o = 0; o < lay.outputs; ++o) {
                const double g = dzr[o];
                if (g == 0.0) continue;
                gb[o] += g;
                double* gwr = gw + static_cast<std::size_t>(o) * lay.inputs;
                for (int i = 0; i < lay.inputs; ++i) gwr[i] += g * xr[i];
            }
        }
        if (l == 0) break;

        std::vector<double> grad_in(static_cast<std::size_t>(rows) * lay.inputs, 0.0);
        for (int r = 0; r < rows; ++r) {
            const double* dzr = dz.data() + static_cast<std::size_t>(r) * lay.outputs;
            double* gr = grad_in.data() + static_cast<std::size_t>(r) * lay.inputs;
            for (int o = 0; o < lay.outputs; ++o) {
                const double g = dzr[o];
                if (g == 0.0) continue;
                const double* wr = w + static_cast<std::size_t>(o) * lay.inputs;
                for (int i = 0; i < lay.inputs; ++i) gr[i] += g * wr[i];
            }
        }
        // Skip connection: hidden layers 1 and 2 (0-based) pass their input
        // straight to their output.
        if (l > 0 && l < kLayers - 1)
            for (std::size_t i = 0; i < grad_in.size(); ++i) grad_in[i] += grad_h[i];
        grad_h.swap(grad_in);
    }
    return total / rows;
}

void ValueNetwork::adam_update(std::span<const double> gradient, const AdamParams& adam) {
    if (gradient.size() != params_.size()) throw DomainError("adam_update: gradient size mismatch");
    ++step_;
    const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const double g = gradient[i];
        m_[i] = adam.beta1 * m_[i] + (1.0 - adam.beta1) * g;
        v_[i] = adam.beta2 * v_[i] + (1.0 - adam.beta2) * g * g;
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params_[i] -= adam.learning_rate * m_hat / (std::sqrt(v_hat) + adam.epsilon);
    }
}

double ValueNetwork::train_step(const TrainBatch& batch, double gamma, double omega, double delta,
                                const AdamParams& adam) {
    const auto targets = bootstrap_targets(batch, gamma, omega);
    std::vector<double> gradient;
    const double mean_loss = loss_and_gradient(batch, targets, delta, gradient);
    if (!std::isfinite(mean_loss))
        throw DivergenceError("non-finite training loss at optimizer step " +
                              std::to_string(step_ + 1));
    adam_update(gradient, adam);
    return mean_loss;
}

// ---- checkpoints --------------------------------------------------------

std::string ValueNetwork::serialize() const {
    json doc;
    doc["version"] = kCheckpointFormatVersion;
    doc["format"] = "carlton-value-network";
    doc["channels"] = shape_.channels;
    doc["hidden"] = shape_.hidden;
    doc["leaky_slope"] = shape_.leaky_slope;
    doc["adam_step"] = step_;
    doc["parameters"] = params_;
    doc["adam_m"] = m_;
    doc["adam_v"] = v_;
    return doc.dump() + "\n";
}

ValueNetwork ValueNetwork::deserialize(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("checkpoint: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != kCheckpointFormatVersion)
            throw ParseError("checkpoint: unsupported version " + doc.at("version").dump());
        if (doc.at("format").get<std::string>() != "carlton-value-network")
            throw ParseError("checkpoint: unexpected format tag");
        MlpShape shape;
        shape.channels = doc.at("channels").get<int>();
        shape.hidden = doc.at("hidden").get<int>();
        shape.leaky_slope = doc.at("leaky_slope").get<double>();
        ValueNetwork net(shape);
        auto params = doc.at("parameters").get<std::vector<double>>();
        auto m = doc.at("adam_m").get<std::vector<double>>();
        auto v = doc.at("adam_v").get<std::vector<double>>();
        if (params.size() != net.params_.size() || m.size() != params.size() ||
            v.size() != params.size())
            throw ParseError("checkpoint: parameter count does not match the declared shape");
        net.params_ = std::move(params);
        net.m_ = std::move(m);
        net.v_ = std::move(v);
        net.step_ = doc.at("adam_step").get<std::int64_t>();
        return net;
    } catch (const json::exception& e) {
        throw ParseError(std::string("checkpoint: ") + e.what());
    }
}

void ValueNetwork::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out << serialize();
}

ValueNetwork ValueNetwork::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

} // namespace carlton
