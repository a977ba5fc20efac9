#pragma once

#include <span>
#include <vector>

#include "carlton/scenario.hpp"

namespace carlton {

struct RewardParams {
    double zeta = 0.9;             // quality at which the flat desired reward kicks in
    double r_desired = 4.0;
    double c1 = 1.1;               // multiplier when the channel is kept
    double rho = 0.7;              // weight of the personal term
    double gamma_neighbor_m = 500.0;

    void validate() const;
};

/// Rank-based personal reward of choosing `action` given the quality vector
/// observed before choosing. Channels are 0-based.
double personal_reward(std::span<const double> qv, int action, int previous_action,
                       const RewardParams& params);

/// Networks whose center lies within gamma_m of network i's center.
std::vector<int> neighbors(std::span<const Point> centers, int network, double gamma_m);

/// Running mean of the neighbors' personal rewards; 0 when there are none.
double social_welfare_reward(std::span<const double> neighbor_personal_rewards);

double total_reward(double r_personal, double r_social, double rho);

} // namespace carlton
