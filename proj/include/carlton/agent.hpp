#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carlton/neural.hpp"
#include "carlton/policy.hpp"
#include "carlton/rng.hpp"

namespace carlton {

struct PolicyParams {
    double alpha = 0.0;          // uniform mixing weight of the behavior policy
    double beta = 1.0;           // softmax inverse temperature
    double epsilon_b = 0.0;      // probability of a stochastic draw
    bool masking = true;         // zero-quality channels get -inf
    bool greedy = false;         // execution mode: forces epsilon_b = 0
    std::optional<double> phi;   // relative switch margin; nullopt disables

    void validate() const;
};

/// Q-values with zero-quality channels set to -inf, or nullopt (hold the
/// previous channel) when every channel has zero quality.
std::optional<std::vector<double>> mask_q(std::span<const double> q_values,
                                          std::span<const double> qv);

/// (1-alpha) softmax(beta q) + alpha-uniform, both restricted to the finite
/// entries of `masked_q`. Masked channels get exactly zero probability.
std::vector<double> behavior_distribution(std::span<const double> masked_q, double alpha,
                                          double beta);

int sample_action(std::span<const double> masked_q, double alpha, double beta, Rng& rng);

/// Argmax over finite entries; ties go to the lowest channel.
int greedy_action(std::span<const double> masked_q);

/// Linear anneal from `start` at episode 1 to `end` at episode B/2, then flat.
/// Episodes are 1-based.
double epsilon_schedule(int episode, int total_episodes, double start = 0.5, double end = 0.01);

enum class SwitchDecision { Keep, Switch };

/// Switch only when the proposed channel beats the current one by more than
/// phi * current quality. phi = nullopt always switches.
SwitchDecision post_process(double current_cq, double proposed_cq, std::optional<double> phi);

/// Full decision for one network turn. `state` is the 2K agent state built
/// from `qv` and the current channel.
int select_action(std::span<const double> state, std::span<const double> qv,
                  const PolicyParams& params, const ValueNetwork& net, Rng& rng,
                  int previous_action);

/// Trained agent behind the shared policy interface. Execution is greedy
/// unless `params` says otherwise.
class CarltonPolicy final : public Policy {
public:
    CarltonPolicy(std::shared_ptr<const ValueNetwork> net, PolicyParams params, std::uint64_t seed = 0);
    std::string name() const override;
    int decide(const TurnContext& turn) override;

private:
    std::shared_ptr<const ValueNetwork> net_;
    PolicyParams params_;
    Rng rng_;
};

} // namespace carlton
