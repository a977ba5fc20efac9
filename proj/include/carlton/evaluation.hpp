#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "carlton/exec.hpp"
#include "carlton/metrics.hpp"
#include "carlton/policy.hpp"
#include "carlton/propagation.hpp"
#include "carlton/scenario.hpp"

namespace carlton {

struct GridSpec {
    int networks_min = 2;
    int networks_max = 15;
    int games_per_n = 30;
    int decision_points = 20;
    double sinr_target_db = 4.0;
    std::uint64_t seed = 0;
    // Centralized search is skipped above this many networks.
    int centralized_max_networks = 5;
    PropagationParams propagation = PropagationParams::defaults();
    GenerationParams generation;
    ScoreWeights weights;
    Exec exec = Exec::Serial;   // Parallel spreads games over workers

    void validate() const;
    int game_count() const { return (networks_max - networks_min + 1) * games_per_n; }
};

/// Everything a game needs besides the policy: the frozen scenario, the
/// initial channels and the serial order. Identical for every policy.
struct GameSetup {
    int n_networks = 0;
    int game = 0;
    std::uint64_t seed = 0;
    Scenario scenario;
    std::vector<int> initial_channels;
    std::vector<int> order;
};

std::uint64_t game_seed(std::uint64_t master, int n_networks, int game);
GameSetup make_game(const GridSpec& spec, int n_networks, int game);

/// One episode driven by `policy`: T rounds over the serial order, each
/// turn sensing the current QV and applying the policy's decision.
EpisodeReport play_episode(const Scenario& scenario, const LinkTable& table, Policy& policy,
                           std::vector<int> initial_channels, const std::vector<int>& order,
                           int decision_points, double sinr_target_db,
                           const ScoreWeights& weights);

struct NamedPolicy {
    std::string name;
    PolicyFactory make;
    bool centralized = false;   // subject to centralized_max_networks
};

struct GameResult {
    std::string policy;
    int n_networks = 0;
    int game = 0;
    std::uint64_t seed = 0;
    EpisodeReport report;
};

struct GridReport {
    std::vector<std::string> policies;   // in evaluation order
    std::vector<GameResult> games;       // policy-major, then N, then game
    std::vector<std::string> warnings;
};

GridReport evaluate_grid(const std::vector<NamedPolicy>& policies, const GridSpec& spec);

struct Aggregate {
    int episodes = 0;
    double cq_mean = 0.0;
    double cq_median = 0.0;
    double cq_min = 0.0;
    double cq_combined = 0.0;   // E[(CQ mean + CQ min) / 2]
    double anccs = 0.0;
    double cts = 0.0;
    double ses = 0.0;
    double ws = 0.0;
};

/// Means over the games of one policy, optionally restricted to N in [n_lo, n_hi].
Aggregate aggregate(const GridReport& report, const std::string& policy, int n_lo = 0,
                    int n_hi = 1 << 30);

void write_results_csv(std::ostream& out, const GridReport& report);
std::string summary_json(const GridReport& report, const GridSpec& spec);

/// Results CSV, JSON summary and the per-N figure tables into `dir`.
void write_grid_artifacts(const std::filesystem::path& dir, const GridReport& report,
                          const GridSpec& spec);

} // namespace carlton
