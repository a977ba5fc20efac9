#include "carlton/propagation.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "carlton/errors.hpp"

namespace carlton {

std::vector<double> PropagationParams::uniform_grid(double first_mhz, double spacing_mhz,
                                                    int channels) {
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(std::max(channels, 0)));
    for (int k = 0; k < channels; ++k) f.push_back(first_mhz + spacing_mhz * k);
    return f;
}

PropagationParams PropagationParams::defaults() {
    PropagationParams p;
    p.carrier_mhz = uniform_grid(208.0, 2.0, 10);
    return p;
}

void PropagationParams::validate() const {
    if (carrier_mhz.empty()) throw DomainError("carrier_mhz must hold at least one channel");
    for (std::size_t k = 0; k < carrier_mhz.size(); ++k) {
        if (!(carrier_mhz[k] > 0.0)) throw DomainError("carrier frequencies must be > 0");
        if (k > 0 && !(carrier_mhz[k] > carrier_mhz[k - 1]))
            throw DomainError("carrier frequencies must be strictly increasing");
    }
    if (!(antenna_height_tx_m > 0.0) || !(antenna_height_rx_m > 0.0))
        throw DomainError("antenna heights must be > 0");
    if (!(antenna_gain_tx > 0.0) || !(antenna_gain_rx > 0.0))
        throw DomainError("antenna gains must be > 0");
    if (!(channel_bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
    if (!(temperature_k > 0.0)) throw DomainError("temperature must be > 0");
    if (!(boltzmann_j_per_k > 0.0)) throw DomainError("Boltzmann constant must be > 0");
}

double egli_path_loss_db(double distance_m, double carrier_mhz, double h_tx_m, double h_rx_m,
                         double g_tx, double g_rx) {
    if (!(distance_m > 0.0)) throw DomainError("egli_path_loss_db: distance must be > 0");
    if (!(carrier_mhz > 0.0)) throw DomainError("egli_path_loss_db: frequency must be > 0");
    if (!(h_tx_m > 0.0) || !(h_rx_m > 0.0))
        throw DomainError("egli_path_loss_db: antenna heights must be > 0");
    if (!(g_tx > 0.0) || !(g_rx > 0.0))
        throw DomainError("egli_path_loss_db: antenna gains must be > 0");

    return 40.0 * std::log10(distance_m) - 20.0 * std::log10(40.0 / carrier_mhz) -
           20.0 * std::log10(h_tx_m * h_rx_m) - 10.0 * std::log10(g_tx * g_rx);
}

double ici_attenuation_db(int k, int k_tilde, std::span<const double> carrier_mhz) {
    const int channels = static_cast<int>(carrier_mhz.size());
    if (k < 0 || k >= channels || k_tilde < 0 || k_tilde >= channels)
        throw DomainError("ici_attenuation_db: channel index out of range");

    switch (std::abs(k - k_tilde)) {
    case 0: return 0.0;
    case 1: return 20.0;
    case 2: return 40.0;
    case 3: return 50.0;
    case 4: return 60.0;
    default: break;
    }
    const double f = carrier_mhz[static_cast<std::size_t>(k)];
    const double ft = carrier_mhz[static_cast<std::size_t>(k_tilde)];
    return std::abs(f - ft) / f <= 0.05 ? 95.0 : 110.0;
}

ThermalNoise thermal_noise(const PropagationParams& p) {
    const double ktb = p.boltzmann_j_per_k * p.temperature_k * p.channel_bandwidth_hz;
    ThermalNoise n;
    n.watts = ktb * db_to_linear(p.noise_figure_db);
    n.dbm = 10.0 * std::log10(ktb) + p.noise_figure_db + 30.0;
    return n;
}

double received_power_dbw(const PropagationParams& p, const Point& tx, const Point& rx,
                          int channel) {
    const double loss = egli_path_loss_db(distance(tx, rx), p.carrier_mhz.at(static_cast<std::size_t>(channel)),
                                          p.antenna_height_tx_m, p.antenna_height_rx_m,
                                          p.antenna_gain_tx, p.antenna_gain_rx);
    return p.transmit_power_dbw - loss;
}

LinkBudget pair_sinr(const Scenario& scenario, const PropagationParams& params,
                     std::span<const int> assignment, UserRef tx, UserRef rx, int channel) {
    const int n_networks = scenario.network_count();
    if (static_cast<int>(assignment.size()) != n_networks)
        throw DomainError("pair_sinr: assignment must cover every network");
    if (tx.network != rx.network) throw DomainError("pair_sinr: tx and rx in different networks");
    if (tx.network < 0 || tx.network >= n_networks) throw DomainError("pair_sinr: bad network");
    const auto& net = scenario.networks[static_cast<std::size_t>(rx.network)];
    if (tx.user < 0 || tx.user >= net.user_count() || rx.user < 0 || rx.user >= net.user_count())
        throw DomainError("pair_sinr: bad user index");
    if (tx.user == rx.user) throw DomainError("pair_sinr: tx and rx are the same user");
    if (channel < 0 || channel >= params.channel_count())
        throw DomainError("pair_sinr: channel out of range");

    const Point& rx_pos = net.users[static_cast<std::size_t>(rx.user)];
    const Point& tx_pos = net.users[static_cast<std::size_t>(tx.user)];

    LinkBudget b;
    b.path_loss_db = egli_path_loss_db(distance(tx_pos, rx_pos),
                                       params.carrier_mhz[static_cast<std::size_t>(channel)],
                                       params.antenna_height_tx_m, params.antenna_height_rx_m,
                                       params.antenna_gain_tx, params.antenna_gain_rx);
    b.received_power_dbw = params.transmit_power_dbw - b.path_loss_db;

    double interference = 0.0;
    for (int l = 0; l < n_networks; ++l) {
        if (l == rx.network) continue;
        const double att = ici_attenuation_db(channel, assignment[static_cast<std::size_t>(l)],
                                              params.carrier_mhz);
        for (const auto& m : scenario.networks[static_cast<std::size_t>(l)].users)
            interference += dbw_to_watts(received_power_dbw(params, m, rx_pos, channel) - att);
    }
    b.interference_watts = interference;
    b.thermal_noise_watts = thermal_noise(params).watts;
    b.sinr_db = linear_to_db(dbw_to_watts(b.received_power_dbw) /
                             (b.interference_watts + b.thermal_noise_watts));
    return b;
}

} // namespace carlton
