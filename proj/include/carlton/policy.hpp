#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "carlton/link_table.hpp"
#include "carlton/scenario.hpp"

namespace carlton {

/// What a network manager knows when its serial turn comes up.
struct TurnContext {
    int network = 0;
    int round = 0;                     // 0-based decision point of this network
    int global_step = 0;               // 0-based index over all N*T decisions
    int current_channel = 0;
    std::span<const double> qv;        // sensed quality of every channel
};

/// Decision interface shared by the learned agent and the baselines.
/// A policy instance is driven by one episode at a time.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual void begin_episode(const Scenario& scenario, const LinkTable& table,
                               std::span<const int> initial_channels) {
        (void)scenario;
        (void)table;
        (void)initial_channels;
    }
    virtual int decide(const TurnContext& turn) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

} // namespace carlton
