#include "carlton/reward.hpp"

#include <algorithm>

#include "carlton/errors.hpp"

namespace carlton {

void RewardParams::validate() const {
    if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("zeta must lie in (0, 1]");
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
    if (!(c1 > 1.0)) throw DomainError("c1 must be > 1");
    if (!(gamma_neighbor_m >= 0.0)) throw DomainError("gamma_neighbor_m must be >= 0");
}

double personal_reward(std::span<const double> qv, int action, int previous_action,
                       const RewardParams& params) {
    const int channels = static_cast<int>(qv.size());
    if (action < 0 || action >= channels || previous_action < 0 || previous_action >= channels)
        throw DomainError("personal_reward: channel out of range");

    const double v = qv[static_cast<std::size_t>(action)];
    double r = 0.0;
    if (v >= params.zeta) {
        r = params.r_desired;
    } else {
        std::vector<double> sorted(qv.begin(), qv.end());
        std::sort(sorted.begin(), sorted.end());
        // Counts channels whose quality does not exceed v; stops at K.
        int i = 0;
        while (i < channels && v >= sorted[static_cast<std::size_t>(i)]) ++i;
        r = 2.0 * (static_cast<double>(i) / channels - 0.5);
    }
    if (action == previous_action) r *= params.c1;
    return r;
}

std::vector<int> neighbors(std::span<const Point> centers, int network, double gamma_m) {
    if (network < 0 || network >= static_cast<int>(centers.size()))
        throw DomainError("neighbors: network index out of range");
    std::vector<int> out;
    const Point& c = centers[static_cast<std::size_t>(network)];
    for (int j = 0; j < static_cast<int>(centers.size()); ++j)
        if (j != network && distance(centers[static_cast<std::size_t>(j)], c) <= gamma_m)
            out.push_back(j);
    return out;
}

double social_welfare_reward(std::span<const double> neighbor_personal_rewards) {
    double r = 0.0;
    int n = 0;
    for (double rp : neighbor_personal_rewards) {
        ++n;
        r = ((n - 1) * r + rp) / n;
    }
    return r;
}

double total_reward(double r_personal, double r_social, double rho) {
    return rho * r_personal + (1.0 - rho) * r_social;
}

} // namespace carlton
