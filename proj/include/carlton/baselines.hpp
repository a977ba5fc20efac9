#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "carlton/exec.hpp"
#include "carlton/link_table.hpp"
#include "carlton/policy.hpp"
#include "carlton/rng.hpp"

namespace carlton {

/// Random Agent: a uniform initial channel, never switched afterwards.
int random_agent_init(int channels, Rng& rng);

class RandomAgentPolicy final : public Policy {
public:
    std::string name() const override { return "ra"; }
    int decide(const TurnContext& turn) override { return turn.current_channel; }
};

/// Jamming-avoidance response: look only at channels within `span_mhz` of
/// the current carrier; move to the best of them if it beats the current
/// quality by at least `margin`. Equal-quality neighbors on both sides: stay.
int jar_step(std::span<const double> qv, int current_channel, std::span<const double> carrier_mhz,
             double margin = 0.05, double span_mhz = 2.0);

class JarPolicy final : public Policy {
public:
    explicit JarPolicy(std::vector<double> carrier_mhz, double margin = 0.05, double span_mhz = 2.0)
        : carrier_mhz_(std::move(carrier_mhz)), margin_(margin), span_mhz_(span_mhz) {}
    std::string name() const override { return "jar"; }
    int decide(const TurnContext& turn) override {
        return jar_step(turn.qv, turn.current_channel, carrier_mhz_, margin_, span_mhz_);
    }

private:
    std::vector<double> carrier_mhz_;
    double margin_;
    double span_mhz_;
};

struct CentralizedResult {
    std::vector<int> assignment;
    double objective = 0.0;           // mean over networks of QV on the assigned channel
    bool exhaustive = false;
    std::uint64_t nodes_visited = 0;
};

enum class SearchMode { Auto, Exhaustive, BranchAndBound };

struct CentralizedOptions {
    SearchMode mode = SearchMode::Auto;
    std::uint64_t exhaustive_limit = 10'000'000;   // K^N above this switches to B&B
    std::uint64_t node_budget = 5'000'000;         // B&B nodes before giving up
    Exec exec = Exec::Serial;
};

/// Assignment maximizing the mean per-network channel quality. Exhaustive
/// search ties go to the lexicographically smallest assignment. Throws
/// SizeError when branch-and-bound exceeds its node budget.
CentralizedResult centralized_optimum(const LinkTable& table, double sinr_target_db,
                                      const CentralizedOptions& options = {});

/// Mean CQ of a complete assignment.
double assignment_objective(const LinkTable& table, std::span<const int> assignment,
                            double sinr_target_db);

/// Moves every network to its centrally optimal channel at its first turn.
class CentralizedPolicy final : public Policy {
public:
    CentralizedPolicy(double sinr_target_db, CentralizedOptions options = {})
        : target_(sinr_target_db), options_(options) {}
    std::string name() const override { return "centralized"; }
    void begin_episode(const Scenario& scenario, const LinkTable& table,
                       std::span<const int> initial_channels) override;
    int decide(const TurnContext& turn) override {
        return plan_.assignment[static_cast<std::size_t>(turn.network)];
    }
    const CentralizedResult& plan() const { return plan_; }

private:
    double target_;
    CentralizedOptions options_;
    CentralizedResult plan_;
};

} // namespace carlton
