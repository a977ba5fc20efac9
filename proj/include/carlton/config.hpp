#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "carlton/evaluation.hpp"
#include "carlton/training.hpp"

namespace carlton {

/// Everything a run needs: training hyper-parameters, the shared
/// environment, and the evaluation grid.
struct RunConfig {
    TrainConfig train;
    int eval_networks_min = 2;
    int eval_networks_max = 15;
    int games_per_n = 30;
    int centralized_max_networks = 5;
    int workers = 1;

    void validate() const;
    GridSpec grid() const;
};

/// Flat JSON object of `key: value` pairs. Unknown keys and wrong types are
/// rejected with ConfigError naming the key. "seed" is required unless
/// `seed_override` is given (which also wins over the file).
RunConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override = {});
RunConfig load_config_file(const std::string& path,
                           std::optional<std::uint64_t> seed_override = {});

/// Fully resolved configuration; feeding it back to parse_config gives the
/// same RunConfig.
std::string effective_config(const RunConfig& config);

} // namespace carlton
