#include "carlton/agent.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "carlton/errors.hpp"
#include "carlton/observation.hpp"

namespace carlton {

void PolicyParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    if (!(epsilon_b >= 0.0 && epsilon_b <= 1.0)) throw DomainError("epsilon_b must lie in [0, 1]");
    if (phi && !(*phi >= 0.0)) throw DomainError("phi must be >= 0");
}

std::optional<std::vector<double>> mask_q(std::span<const double> q_values,
                                          std::span<const double> qv) {
    if (q_values.size() != qv.size()) throw DomainError("mask_q: length mismatch");
    std::vector<double> out(q_values.begin(), q_values.end());
    bool any = false;
    for (std::size_t k = 0; k < qv.size(); ++k) {
        if (qv[k] == 0.0)
            out[k] = -std::numeric_limits<double>::infinity();
        else
            any = true;
    }
    if (!any) return std::nullopt;
    return out;
}

std::vector<double> behavior_distribution(std::span<const double> masked_q, double alpha,
                                          double beta) {
    double top = -std::numeric_limits<double>::infinity();
    int live = 0;
    for (double q : masked_q)
        if (std::isfinite(q)) {
            top = std::max(top, q);
            ++live;
        }
    if (live == 0) throw DomainError("behavior_distribution: every channel is masked");

    std::vector<double> p(masked_q.size(), 0.0);
    double z = 0.0;
    for (std::size_t k = 0; k < masked_q.size(); ++k)
        if (std::isfinite(masked_q[k])) {
            p[k] = std::exp(beta * (masked_q[k] - top));
            z += p[k];
        }
    for (std::size_t k = 0; k < masked_q.size(); ++k)
        if (std::isfinite(masked_q[k])) p[k] = (1.0 - alpha) * p[k] / z + alpha / live;
    return p;
}

int sample_action(std::span<const double> masked_q, double alpha, double beta, Rng& rng) {
    const auto p = behavior_distribution(masked_q, alpha, beta);
    std::discrete_distribution<int> dist(p.begin(), p.end());
    return dist(rng);
}

int greedy_action(std::span<const double> masked_q) {
    int best = -1;
    double best_q = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < masked_q.size(); ++k)
        if (std::isfinite(masked_q[k]) && (best < 0 || masked_q[k] > best_q)) {
            best = static_cast<int>(k);
            best_q = masked_q[k];
        }
    if (best < 0) throw DomainError("greedy_action: every channel is masked");
    return best;
}

double epsilon_schedule(int episode, int total_episodes, double start, double end) {
    if (total_episodes < 1 || episode < 1 || episode > total_episodes)
        throw DomainError("epsilon_schedule: episode must lie in [1, B]");
    const double half = total_episodes / 2.0;
    if (half <= 1.0 || episode >= half) return end;
    return start - (start - end) * (episode - 1) / (half - 1.0);
}

SwitchDecision post_process(double current_cq, double proposed_cq, std::optional<double> phi) {
    if (!phi) return SwitchDecision::Switch;
    return proposed_cq - current_cq > *phi * current_cq ? SwitchDecision::Switch
                                                        : SwitchDecision::Keep;
}

int select_action(std::span<const double> state, std::span<const double> qv,
                  const PolicyParams& params, const ValueNetwork& net, Rng& rng,
                  int previous_action) {
    const auto q = net.forward(state);
    std::vector<double> candidates;
    if (params.masking) {
        auto masked = mask_q(q, qv);
        if (!masked) return previous_action;
        candidates = std::move(*masked);
    } else {
        candidates = q;
    }

    const double eps = params.greedy ? 0.0 : params.epsilon_b;
    int action = 0;
    if (eps > 0.0 && uniform01(rng) < eps)
        action = sample_action(candidates, params.alpha, params.beta, rng);
    else
        action = greedy_action(candidates);

    if (action != previous_action && params.phi &&
        post_process(qv[static_cast<std::size_t>(previous_action)],
                     qv[static_cast<std::size_t>(action)], params.phi) == SwitchDecision::Keep)
        return previous_action;
    return action;
}

CarltonPolicy::CarltonPolicy(std::shared_ptr<const ValueNetwork> net, PolicyParams params,
                             std::uint64_t seed)
    : net_(std::move(net)), params_(params), rng_(make_rng(seed, {0xa6e7})) {
    if (!net_) throw DomainError("CarltonPolicy: missing value network");
    params_.validate();
}

std::string CarltonPolicy::name() const {
    if (!params_.phi) return "carlton";
    std::ostringstream s;
    s << "carlton+phi=" << *params_.phi;
    return s.str();
}

int CarltonPolicy::decide(const TurnContext& turn) {
    if (static_cast<int>(turn.qv.size()) != net_->shape().channels)
        throw DomainError("CarltonPolicy: network trained for a different channel count");
    const auto state = build_state(turn.current_channel, turn.qv);
    return select_action(state.values, turn.qv, params_, *net_, rng_, turn.current_channel);
}

} // namespace carlton
