#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "carlton/config.hpp"
#include "carlton/evaluation.hpp"
#include "carlton/training.hpp"

namespace carlton {

/// Writes effective_config.json, train_log.csv and checkpoint.json (plus
/// checkpoints/episode_<i>.json every checkpoint_interval episodes) into
/// `out_dir`. Progress lines go to `progress`.
TrainResult cmd_train(const RunConfig& config, const std::filesystem::path& out_dir,
                      std::ostream& progress);

struct EvalRequest {
    std::vector<std::string> policies{"carlton", "ra", "jar", "centralized"};
    std::vector<std::optional<double>> phi{std::nullopt};   // one CARLTON block per value
    std::optional<std::filesystem::path> checkpoint;
};

/// Parses "none,0.05,0.1" style lists; "none" and "0" both mean no post-processing.
std::vector<std::optional<double>> parse_phi_list(const std::string& text);
std::vector<std::string> parse_policy_list(const std::string& text);

GridReport cmd_eval(const RunConfig& config, const EvalRequest& request,
                    const std::filesystem::path& out_dir, std::ostream& progress);

/// Human-readable dump of a scenario file.
void cmd_inspect(const std::filesystem::path& scenario_path, const RunConfig& config,
                 std::ostream& out);

/// Generates an N-network scenario from config.seed and writes it as JSON.
Scenario cmd_generate(const RunConfig& config, int n_networks, const std::filesystem::path& out);

} // namespace carlton
