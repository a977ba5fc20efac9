#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "carlton/agent.hpp"
#include "carlton/exec.hpp"
#include "carlton/link_table.hpp"
#include "carlton/metrics.hpp"
#include "carlton/neural.hpp"
#include "carlton/propagation.hpp"
#include "carlton/replay.hpp"
#include "carlton/reward.hpp"
#include "carlton/scenario.hpp"

namespace carlton {

struct TrainConfig {
    int episodes = 1000;                 // B
    int decision_points = 20;            // T, also the local memory size
    int updates_per_episode = 40;        // N_E
    int batch_size = 32;
    std::size_t replay_capacity = 100000;
    double gamma = 0.9;
    double huber_delta = 1.0;
    int train_networks_min = 2;
    int train_networks_max = 7;

    // Both switch from the first to the second value after episode B/2.
    double lr_initial = 2.5e-4;
    double lr_final = 1e-4;
    double omega_initial = 0.02;
    double omega_final = 0.2;
    double epsilon_start = 0.5;
    double epsilon_end = 0.01;

    double sinr_target_db = 4.0;
    double alpha = 0.0;
    double beta = 1.0;
    bool masking = true;

    MlpShape network;
    AdamParams adam;
    RewardParams reward;
    PropagationParams propagation = PropagationParams::defaults();
    GenerationParams generation;
    ScoreWeights weights;

    std::uint64_t seed = 0;
    int checkpoint_interval = 0;         // episodes between checkpoints; 0 = final only
    Exec exec = Exec::Serial;

    void validate() const;

    double lr(int episode) const { return 2 * episode > episodes ? lr_final : lr_initial; }
    double omega(int episode) const { return 2 * episode > episodes ? omega_final : omega_initial; }
    double epsilon(int episode) const {
        return epsilon_schedule(episode, episodes, epsilon_start, epsilon_end);
    }
};

struct EpisodeOutcome {
    std::vector<std::vector<Transition>> transitions;   // per network, in turn order
    double accumulated_reward = 0.0;                    // mean over networks of summed rewards
    int decisions = 0;
    EpisodeReport report;
};

/// One training episode on a fixed scenario: serial turns in a random
/// order, T rounds, delayed reward finalization. `episode` (1-based)
/// drives the exploration schedule.
EpisodeOutcome run_episode(const Scenario& scenario, const LinkTable& table,
                           const ValueNetwork& net, const TrainConfig& config, int episode,
                           Rng& rng);

/// Same, with the initial channels and serial order fixed by the caller.
EpisodeOutcome run_episode(const Scenario& scenario, const LinkTable& table,
                           const ValueNetwork& net, const TrainConfig& config, int episode,
                           std::vector<int> initial_channels, std::vector<int> order, Rng& rng);

struct EpisodeLog {
    int episode = 0;
    int n_networks = 0;
    double accumulated_reward = 0.0;
    double cq_mean = 0.0;
    double cq_median = 0.0;
    double cq_min = 0.0;
    double loss_mean = 0.0;
    double loss_max = 0.0;
    double epsilon = 0.0;
    double omega = 0.0;
    double lr = 0.0;
    std::size_t replay_size = 0;
};

struct TrainResult {
    ValueNetwork net;
    std::vector<EpisodeLog> log;
};

using EpisodeCallback = std::function<void(const EpisodeLog&, const ValueNetwork&)>;

/// Full training run. Throws DivergenceError (with episode context) on a
/// non-finite loss.
TrainResult train(const TrainConfig& config, const EpisodeCallback& on_episode = {});

void write_log_header(std::ostream& out);
void write_log_row(std::ostream& out, const EpisodeLog& row);

/// Mean accumulated reward over 1-based episodes [first, last].
double window_mean_reward(const std::vector<EpisodeLog>& log, int first, int last);

} // namespace carlton
