#include "carlton/observation.hpp"

#include <algorithm>
#include <string>

#include "carlton/errors.hpp"

namespace carlton {

Observation observe(const LinkTable& table, std::span<const int> assignment, int network,
                    double sinr_target_db, Exec exec) {
    table.check_assignment(assignment);
    if (network < 0 || network >= table.network_count())
        throw DomainError("observe: network index out of range");
    const int m = table.user_count(network);
    if (m < 2) throw DomainError("observe: network has fewer than 2 users");
    const int channels = table.channel_count();

    Observation obs;
    obs.sinr_target_db = sinr_target_db;
    obs.sinr_db = Matrix(m, channels);
    obs.bsinr = Matrix(m, channels);

#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int c = 0; c < m * channels; ++c) {
        const int j = c / channels;
        const int k = c % channels;
        const double s = table.user_sinr_db(assignment, network, j, k);
        obs.sinr_db(j, k) = s;
        obs.bsinr(j, k) = s > sinr_target_db ? 1.0 : 0.0;
    }

    obs.quality.assign(static_cast<std::size_t>(channels), 0.0);
    for (int k = 0; k < channels; ++k) {
        double count = 0.0;
        for (int j = 0; j < m; ++j) count += obs.bsinr(j, k);
        obs.quality[static_cast<std::size_t>(k)] = count / m;
    }
    return obs;
}

double user_average_sinr_db(const Scenario& scenario, const PropagationParams& params,
                            std::span<const int> assignment, int network, int user,
                            int channel) {
    if (network < 0 || network >= scenario.network_count())
        throw DomainError("user_average_sinr_db: network index out of range");
    const int m = scenario.networks[static_cast<std::size_t>(network)].user_count();
    if (m < 2)
        throw DomainError("user_average_sinr_db: network " + std::to_string(network) +
                          " has fewer than 2 users");
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == user) continue;
        const auto link = pair_sinr(scenario, params, assignment, {network, i}, {network, user},
                                    channel);
        sum += db_to_linear(link.sinr_db);
    }
    return linear_to_db(sum / (m - 1));
}

std::vector<double> quality_vector_reference(const Scenario& scenario,
                                             const PropagationParams& params,
                                             std::span<const int> assignment, int network,
                                             double sinr_target_db) {
    const int m = scenario.networks.at(static_cast<std::size_t>(network)).user_count();
    const int channels = params.channel_count();
    std::vector<double> qv(static_cast<std::size_t>(channels), 0.0);
    for (int k = 0; k < channels; ++k) {
        int count = 0;
        for (int j = 0; j < m; ++j)
            if (user_average_sinr_db(scenario, params, assignment, network, j, k) > sinr_target_db)
                ++count;
        qv[static_cast<std::size_t>(k)] = static_cast<double>(count) / m;
    }
    return qv;
}

AgentState build_state(int current_channel, std::span<const double> qv) {
    const int channels = static_cast<int>(qv.size());
    if (current_channel < 0 || current_channel >= channels)
        throw DomainError("build_state: channel out of range");
    AgentState s;
    s.values.assign(static_cast<std::size_t>(2 * channels), 0.0);
    s.values[static_cast<std::size_t>(current_channel)] = 1.0;
    std::copy(qv.begin(), qv.end(), s.values.begin() + channels);
    return s;
}

} // namespace carlton
