#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carlton/rng.hpp"

namespace carlton {

/// Dense value network: 2K -> H -> H -> H -> K. Hidden layers use Leaky-ReLU;
/// hidden layers 2 and 3 add their input to their activated output.
struct MlpShape {
    int channels = 10;
    int hidden = 128;
    double leaky_slope = 0.2;

    int input_size() const { return 2 * channels; }
    friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

struct AdamParams {
    double learning_rate = 2.5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
};

/// Minibatch of transitions, states stored row-major (size x 2K).
struct TrainBatch {
    int size = 0;
    int state_size = 0;
    std::vector<double> states;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> next_states;
};

double mellowmax(std::span<const double> values, double omega);
double huber(double e, double delta);
double huber_derivative(double e, double delta);

class ValueNetwork {
public:
    static constexpr int kLayers = 4;

    explicit ValueNetwork(MlpShape shape = {});

    /// Glorot-uniform weights, zero biases; clears optimizer state.
    void initialize(Rng& rng);

    const MlpShape& shape() const { return shape_; }
    std::size_t parameter_count() const { return params_.size(); }
    std::span<double> parameters() { return params_; }
    std::span<const double> parameters() const { return params_; }

    int layer_inputs(int layer) const;
    int layer_outputs(int layer) const;
    std::span<double> weights(int layer);
    std::span<double> biases(int layer);
    std::span<const double> weights(int layer) const;
    std::span<const double> biases(int layer) const;

    std::vector<double> forward(std::span<const double> state) const;
    /// Row-major batch forward: `states` is rows x 2K, result rows x K.
    std::vector<double> forward_batch(std::span<const double> states, int rows) const;

    /// r + gamma * mellowmax_omega(Q(s')) for every row; no masking.
    std::vector<double> bootstrap_targets(const TrainBatch& batch, double gamma,
                                          double omega) const;

    /// Mean Huber loss of Q(s)[a] against fixed targets, plus its gradient
    /// with respect to every parameter (same layout as parameters()).
    double loss_and_gradient(const TrainBatch& batch, std::span<const double> targets,
                             double delta, std::vector<double>& gradient) const;
    double loss(const TrainBatch& batch, std::span<const double> targets, double delta) const;

    /// One semi-gradient Adam step. Returns the batch-mean loss before the
    /// update; throws DivergenceError on a non-finite loss.
    double train_step(const TrainBatch& batch, double gamma, double omega, double delta,
                      const AdamParams& adam);

    void adam_update(std::span<const double> gradient, const AdamParams& adam);
    std::int64_t adam_step() const { return step_; }
    std::span<const double> adam_first_moment() const { return m_; }
    std::span<const double> adam_second_moment() const { return v_; }

    std::string serialize() const;
    static ValueNetwork deserialize(const std::string& text);
    void save(const std::string& path) const;
    static ValueNetwork load(const std::string& path);

    friend bool operator==(const ValueNetwork&, const ValueNetwork&) = default;

private:
    struct Layout {
        std::size_t weight_offset = 0;
        std::size_t bias_offset = 0;
        int inputs = 0;
        int outputs = 0;
        friend bool operator==(const Layout&, const Layout&) = default;
    };

    struct Activations;
    void forward_impl(std::span<const double> states, int rows, Activations& act) const;

    MlpShape shape_;
    std::vector<Layout> layout_;
    std::vector<double> params_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::int64_t step_ = 0;
};

inline constexpr int kCheckpointFormatVersion = 1;

} // namespace carlton
