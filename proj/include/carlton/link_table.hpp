#pragma once

#include <span>
#include <vector>

#include "carlton/exec.hpp"
#include "carlton/propagation.hpp"
#include "carlton/scenario.hpp"

namespace carlton {

/// Per-scenario cache of received powers, folded into the two quantities the
/// SINR of a user depends on:
///   signal(k, j)      mean received power from j's intra-network peers
///   incoming(k, j, l) total power arriving at j from all users of network l
/// Both are in watts at channel k's carrier, before ICI attenuation.
/// With these, the user-average SINR for any assignment is O(N) per (j, k).
class LinkTable {
public:
    LinkTable(const Scenario& scenario, const PropagationParams& params);

    int channel_count() const { return channels_; }
    int network_count() const { return networks_; }
    int user_count(int network) const { return offsets_[network + 1] - offsets_[network]; }
    int global_user(int network, int user) const { return offsets_[network] + user; }
    int total_users() const { return offsets_.back(); }
    double noise_watts() const { return noise_watts_; }

    double signal(int k, int global_rx) const {
        return signal_[static_cast<std::size_t>(k * users_ + global_rx)];
    }
    double incoming(int k, int global_rx, int from_network) const {
        return incoming_[(static_cast<std::size_t>(k) * users_ + global_rx) * networks_ +
                         from_network];
    }
    /// Linear attenuation factor 10^(-T(k, k_tilde)/10).
    double attenuation(int k, int k_tilde) const {
        return attenuation_[static_cast<std::size_t>(k * channels_ + k_tilde)];
    }

    /// Linear user-average SINR of `user` of `network` on channel k, with all
    /// other networks on their channels in `assignment`.
    double user_sinr_linear(std::span<const int> assignment, int network, int user, int k) const;
    double user_sinr_db(std::span<const int> assignment, int network, int user, int k) const;

    void check_assignment(std::span<const int> assignment) const;

private:
    int channels_ = 0;
    int networks_ = 0;
    int users_ = 0;
    double noise_watts_ = 0.0;
    std::vector<int> offsets_;
    std::vector<double> signal_;
    std::vector<double> incoming_;
    std::vector<double> attenuation_;
};

/// Fraction of `network`'s users whose average SINR exceeds the target, for
/// each channel. Exec::Parallel splits the (user, channel) grid over threads.
std::vector<double> quality_vector(const LinkTable& table, std::span<const int> assignment,
                                   int network, double sinr_target_db,
                                   Exec exec = Exec::Serial);

/// Quality vectors of every network under `assignment`.
std::vector<std::vector<double>> all_quality_vectors(const LinkTable& table,
                                                     std::span<const int> assignment,
                                                     double sinr_target_db,
                                                     Exec exec = Exec::Serial);

/// QV entry of `network` on `channel` only, others fixed by `assignment`.
double channel_quality(const LinkTable& table, std::span<const int> assignment, int network,
                       int channel, double sinr_target_db);

} // namespace carlton
