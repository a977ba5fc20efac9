#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "carlton/scenario.hpp"

namespace carlton {

/// Physical constants and radio settings shared by every link.
struct PropagationParams {
    double boltzmann_j_per_k = 1.380649e-23;
    double temperature_k = 295.0;          // room temperature
    double channel_bandwidth_hz = 2e6;
    double noise_figure_db = 6.0;
    std::vector<double> carrier_mhz;       // strictly increasing, one per channel
    double antenna_height_tx_m = 1.0;
    double antenna_height_rx_m = 1.0;
    double antenna_gain_tx = 1.0;          // absolute
    double antenna_gain_rx = 1.0;
    double transmit_power_dbw = 2.0;

    /// 10 channels, 208..226 MHz on a 2 MHz grid.
    static PropagationParams defaults();
    static std::vector<double> uniform_grid(double first_mhz, double spacing_mhz, int channels);

    int channel_count() const { return static_cast<int>(carrier_mhz.size()); }
    void validate() const;
};

struct ThermalNoise {
    double watts = 0.0;
    double dbm = 0.0;
};

struct LinkBudget {
    double path_loss_db = 0.0;
    double received_power_dbw = 0.0;
    double interference_watts = 0.0;
    double thermal_noise_watts = 0.0;
    double sinr_db = 0.0;
};

struct UserRef {
    int network = 0;
    int user = 0;
};

inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }
inline double watts_to_dbw(double watts) { return 10.0 * std::log10(watts); }
inline double dbm_to_watts(double dbm) { return dbw_to_watts(dbm - 30.0); }
inline double watts_to_dbm(double watts) { return watts_to_dbw(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Egli path loss in dB: 40log d - 20log(40/f) - 20log(Ht*Hr) - 10log(Gt*Gr).
double egli_path_loss_db(double distance_m, double carrier_mhz, double h_tx_m, double h_rx_m,
                         double g_tx, double g_rx);

/// Inter-carrier attenuation in dB seen on channel `k` from a transmitter on
/// `k_tilde`. Channel indices are 0-based into `carrier_mhz`; the ratio test
/// for far channels is normalized by the channel of interest.
double ici_attenuation_db(int k, int k_tilde, std::span<const double> carrier_mhz);

ThermalNoise thermal_noise(const PropagationParams& params);

double received_power_dbw(const PropagationParams& params, const Point& tx, const Point& rx,
                          int channel);

/// SINR of one intra-network link (tx -> rx) on `channel`, with every other
/// network transmitting on its assigned channel. `assignment` holds one
/// 0-based channel per network. Interference is summed in watts.
LinkBudget pair_sinr(const Scenario& scenario, const PropagationParams& params,
                     std::span<const int> assignment, UserRef tx, UserRef rx, int channel);

} // namespace carlton
