#pragma once

#include <span>
#include <vector>

#include "carlton/link_table.hpp"
#include "carlton/propagation.hpp"
#include "carlton/scenario.hpp"

namespace carlton {

/// Row-major dense matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// What a network manager assembles from its users' per-channel reports.
struct Observation {
    Matrix sinr_db;          // M x K user-average SINR
    Matrix bsinr;            // M x K, 1 where sinr_db > target
    std::vector<double> quality;
    double sinr_target_db = 0.0;
};

Observation observe(const LinkTable& table, std::span<const int> assignment, int network,
                    double sinr_target_db, Exec exec = Exec::Serial);

/// Mean over the M-1 peer links of pair_sinr (linear domain), in dB. Direct
/// link-by-link route; used as the oracle for the cached kernels.
double user_average_sinr_db(const Scenario& scenario, const PropagationParams& params,
                            std::span<const int> assignment, int network, int user, int channel);

/// Quality vector via user_average_sinr_db for every (user, channel).
std::vector<double> quality_vector_reference(const Scenario& scenario,
                                             const PropagationParams& params,
                                             std::span<const int> assignment, int network,
                                             double sinr_target_db);

/// Agent input: one-hot of the current channel followed by the quality vector.
struct AgentState {
    std::vector<double> values;

    int channel_count() const { return static_cast<int>(values.size() / 2); }
    std::span<const double> cbr() const { return std::span(values).first(values.size() / 2); }
    std::span<const double> qv() const { return std::span(values).subspan(values.size() / 2); }
};

AgentState build_state(int current_channel, std::span<const double> qv);

} // namespace carlton
