#include "carlton/link_table.hpp"

#include <cmath>
#include <string>

#include "carlton/errors.hpp"

namespace carlton {

LinkTable::LinkTable(const Scenario& scenario, const PropagationParams& params) {
    params.validate();
    scenario.validate();
    channels_ = params.channel_count();
    networks_ = scenario.network_count();
    for (int n = 0; n < networks_; ++n)
        if (scenario.networks[static_cast<std::size_t>(n)].user_count() < 2)
            throw DomainError("network " + std::to_string(n) + " needs at least two users");
    offsets_.assign(static_cast<std::size_t>(networks_) + 1, 0);
    for (int n = 0; n < networks_; ++n)
        offsets_[n + 1] = offsets_[n] + scenario.networks[static_cast<std::size_t>(n)].user_count();
    users_ = offsets_.back();
    noise_watts_ = thermal_noise(params).watts;

    std::vector<Point> pos;
    std::vector<int> owner;
    pos.reserve(static_cast<std::size_t>(users_));
    for (int n = 0; n < networks_; ++n)
        for (const auto& u : scenario.networks[static_cast<std::size_t>(n)].users) {
            pos.push_back(u);
            owner.push_back(n);
        }

    attenuation_.resize(static_cast<std::size_t>(channels_ * channels_));
    for (int k = 0; k < channels_; ++k)
        for (int kt = 0; kt < channels_; ++kt)
            attenuation_[static_cast<std::size_t>(k * channels_ + kt)] =
                db_to_linear(-ici_attenuation_db(k, kt, params.carrier_mhz));

    signal_.assign(static_cast<std::size_t>(channels_ * users_), 0.0);
    incoming_.assign(static_cast<std::size_t>(channels_) * users_ * networks_, 0.0);

    for (int k = 0; k < channels_; ++k) {
        for (int j = 0; j < users_; ++j) {
            const int home = owner[static_cast<std::size_t>(j)];
            double* in = &incoming_[(static_cast<std::size_t>(k) * users_ + j) * networks_];
            double peer_sum = 0.0;
            for (int i = 0; i < users_; ++i) {
                if (i == j) continue;
                const double w = dbw_to_watts(received_power_dbw(
                    params, pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)], k));
                const int from = owner[static_cast<std::size_t>(i)];
                if (from == home)
                    peer_sum += w;
                else
                    in[from] += w;
            }
            const int peers = user_count(home) - 1;
            signal_[static_cast<std::size_t>(k * users_ + j)] =
                peers > 0 ? peer_sum / peers : std::nan("");
        }
    }
}

void LinkTable::check_assignment(std::span<const int> assignment) const {
    if (static_cast<int>(assignment.size()) != networks_)
        throw DomainError("assignment must hold one channel per network");
    for (int c : assignment)
        if (c < 0 || c >= channels_) throw DomainError("assignment channel out of range");
}

double LinkTable::user_sinr_linear(std::span<const int> assignment, int network, int user,
                                   int k) const {
    const int j = global_user(network, user);
    const double* in = &incoming_[(static_cast<std::size_t>(k) * users_ + j) * networks_];
    const double* att = &attenuation_[static_cast<std::size_t>(k * channels_)];
    double interference = 0.0;
    for (int l = 0; l < networks_; ++l) {
        if (l == network) continue;
        interference += in[l] * att[assignment[static_cast<std::size_t>(l)]];
    }
    return signal(k, j) / (noise_watts_ + interference);
}

double LinkTable::user_sinr_db(std::span<const int> assignment, int network, int user,
                               int k) const {
    return linear_to_db(user_sinr_linear(assignment, network, user, k));
}

namespace {

void require_nondegenerate(const LinkTable& table, int network) {
    if (network < 0 || network >= table.network_count())
        throw DomainError("network index out of range");
    if (table.user_count(network) < 2)
        throw DomainError("network " + std::to_string(network) +
                          " has fewer than 2 users; average SINR is undefined");
}

} // namespace

std::vector<double> quality_vector(const LinkTable& table, std::span<const int> assignment,
                                   int network, double sinr_target_db, Exec exec) {
    table.check_assignment(assignment);
    require_nondegenerate(table, network);
    const int m = table.user_count(network);
    const int channels = table.channel_count();
    const int cells = m * channels;
    std::vector<unsigned char> above(static_cast<std::size_t>(cells));

#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int c = 0; c < cells; ++c) {
        const int j = c / channels;
        const int k = c % channels;
        above[static_cast<std::size_t>(c)] =
            table.user_sinr_db(assignment, network, j, k) > sinr_target_db ? 1 : 0;
    }

    std::vector<double> qv(static_cast<std::size_t>(channels), 0.0);
    for (int k = 0; k < channels; ++k) {
        int count = 0;
        for (int j = 0; j < m; ++j) count += above[static_cast<std::size_t>(j * channels + k)];
        qv[static_cast<std::size_t>(k)] = static_cast<double>(count) / m;
    }
    return qv;
}

std::vector<std::vector<double>> all_quality_vectors(const LinkTable& table,
                                                     std::span<const int> assignment,
                                                     double sinr_target_db, Exec exec) {
    table.check_assignment(assignment);
    const int networks = table.network_count();
    const int channels = table.channel_count();
    for (int n = 0; n < networks; ++n) require_nondegenerate(table, n);

    // Flatten (network, user, channel) so the parallel split is balanced
    // regardless of network sizes.
    std::vector<int> owner;
    std::vector<int> local;
    owner.reserve(static_cast<std::size_t>(table.total_users()));
    for (int n = 0; n < networks; ++n)
        for (int u = 0; u < table.user_count(n); ++u) {
            owner.push_back(n);
            local.push_back(u);
        }
    const int cells = table.total_users() * channels;
    std::vector<unsigned char> above(static_cast<std::size_t>(cells));

#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int c = 0; c < cells; ++c) {
        const int g = c / channels;
        const int k = c % channels;
        above[static_cast<std::size_t>(c)] =
            table.user_sinr_db(assignment, owner[static_cast<std::size_t>(g)],
                               local[static_cast<std::size_t>(g)], k) > sinr_target_db
                ? 1
                : 0;
    }

    std::vector<std::vector<double>> out(static_cast<std::size_t>(networks));
    for (int n = 0; n < networks; ++n) {
        const int m = table.user_count(n);
        auto& qv = out[static_cast<std::size_t>(n)];
        qv.assign(static_cast<std::size_t>(channels), 0.0);
        for (int k = 0; k < channels; ++k) {
            int count = 0;
            for (int u = 0; u < m; ++u)
                count += above[static_cast<std::size_t>(table.global_user(n, u) * channels + k)];
            qv[static_cast<std::size_t>(k)] = static_cast<double>(count) / m;
        }
    }
    return out;
}

double channel_quality(const LinkTable& table, std::span<const int> assignment, int network,
                       int channel, double sinr_target_db) {
    const int m = table.user_count(network);
    int count = 0;
    for (int j = 0; j < m; ++j)
        if (table.user_sinr_db(assignment, network, j, channel) > sinr_target_db) ++count;
    return static_cast<double>(count) / m;
}

} // namespace carlton
