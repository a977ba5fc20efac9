#include "carlton/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "carlton/errors.hpp"

namespace carlton {

using nlohmann::json;

namespace {

double as_double(const std::string& key, const json& v) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return d;
}

int as_int(const std::string& key, const json& v) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 2e9) return static_cast<int>(d);
    }
    throw ConfigError(key, "expected an integer");
}

bool as_bool(const std::string& key, const json& v) {
    if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
    return v.get<bool>();
}

struct CarrierGrid {
    int channels = 10;
    double first_mhz = 208.0;
    double spacing_mhz = 2.0;
};

using Setter = std::function<void(RunConfig&, CarrierGrid&, const std::string&, const json&)>;

template <typename T>
Setter number(T TrainConfig::*field) {
    return [field](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) {
        if constexpr (std::is_same_v<T, int>) c.train.*field = as_int(k, v);
        else c.train.*field = as_double(k, v);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        // environment
        {"channels", [](RunConfig&, CarrierGrid& g, const std::string& k, const json& v) { g.channels = as_int(k, v); }},
        {"carrier_first_mhz", [](RunConfig&, CarrierGrid& g, const std::string& k, const json& v) { g.first_mhz = as_double(k, v); }},
        {"carrier_spacing_mhz", [](RunConfig&, CarrierGrid& g, const std::string& k, const json& v) { g.spacing_mhz = as_double(k, v); }},
        {"antenna_gain_tx", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.antenna_gain_tx = as_double(k, v); }},
        {"antenna_gain_rx", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.antenna_gain_rx = as_double(k, v); }},
        {"antenna_height_tx_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.antenna_height_tx_m = as_double(k, v); }},
        {"antenna_height_rx_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.antenna_height_rx_m = as_double(k, v); }},
        {"transmit_power_dbw", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.transmit_power_dbw = as_double(k, v); }},
        {"temperature_k", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.temperature_k = as_double(k, v); }},
        {"noise_figure_db", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.noise_figure_db = as_double(k, v); }},
        {"channel_bandwidth_hz", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.propagation.channel_bandwidth_hz = as_double(k, v); }},
        {"center_range_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.u1_m = as_double(k, v); }},
        {"radius_min_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.x1_m = as_double(k, v); }},
        {"radius_max_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.x2_m = as_double(k, v); }},
        {"user_spread_std_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.user_spread_std_m = as_double(k, v); }},
        {"users_min", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.users_min = as_int(k, v); }},
        {"users_max", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.generation.users_max = as_int(k, v); }},
        // reward
        {"sinr_threshold_db", number(&TrainConfig::sinr_target_db)},
        {"r_desired", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.reward.r_desired = as_double(k, v); }},
        {"c1", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.reward.c1 = as_double(k, v); }},
        {"zeta", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.reward.zeta = as_double(k, v); }},
        {"neighbor_distance_m", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.reward.gamma_neighbor_m = as_double(k, v); }},
        {"rho", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.reward.rho = as_double(k, v); }},
        // behavior policy
        {"alpha", number(&TrainConfig::alpha)},
        {"beta", number(&TrainConfig::beta)},
        {"masking", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.masking = as_bool(k, v); }},
        {"epsilon_start", number(&TrainConfig::epsilon_start)},
        {"epsilon_end", number(&TrainConfig::epsilon_end)},
        // learner
        {"huber_delta", number(&TrainConfig::huber_delta)},
        {"episodes", number(&TrainConfig::episodes)},
        {"omega_initial", number(&TrainConfig::omega_initial)},
        {"omega_final", number(&TrainConfig::omega_final)},
        {"gamma", number(&TrainConfig::gamma)},
        {"lr_initial", number(&TrainConfig::lr_initial)},
        {"lr_final", number(&TrainConfig::lr_final)},
        {"adam_beta1", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.adam.beta1 = as_double(k, v); }},
        {"adam_beta2", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.adam.beta2 = as_double(k, v); }},
        {"adam_epsilon", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.adam.epsilon = as_double(k, v); }},
        {"replay_capacity", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) {
             const int n = as_int(k, v);
             if (n < 1) throw ConfigError(k, "must be >= 1");
             c.train.replay_capacity = static_cast<std::size_t>(n);
         }},
        {"decision_points", number(&TrainConfig::decision_points)},
        {"hidden_layers", [](RunConfig&, CarrierGrid&, const std::string& k, const json& v) {
             if (as_int(k, v) != 3) throw ConfigError(k, "the value network has exactly 3 hidden layers");
         }},
        {"hidden_units", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.network.hidden = as_int(k, v); }},
        {"skip_connections", [](RunConfig&, CarrierGrid&, const std::string& k, const json& v) {
             if (as_int(k, v) != 2) throw ConfigError(k, "the value network has exactly 2 skip connections");
         }},
        {"leaky_relu_slope", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.network.leaky_slope = as_double(k, v); }},
        {"updates_per_episode", number(&TrainConfig::updates_per_episode)},
        {"batch_size", number(&TrainConfig::batch_size)},
        {"train_networks_min", number(&TrainConfig::train_networks_min)},
        {"train_networks_max", number(&TrainConfig::train_networks_max)},
        {"checkpoint_interval", number(&TrainConfig::checkpoint_interval)},
        // evaluation
        {"eval_networks_min", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.eval_networks_min = as_int(k, v); }},
        {"eval_networks_max", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.eval_networks_max = as_int(k, v); }},
        {"games_per_n", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.games_per_n = as_int(k, v); }},
        {"centralized_max_networks", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.centralized_max_networks = as_int(k, v); }},
        {"weight_cq", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.weights.cq = as_double(k, v); }},
        {"weight_anccs", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.weights.anccs = as_double(k, v); }},
        {"weight_cts", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.weights.cts = as_double(k, v); }},
        {"weight_ses", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.train.weights.ses = as_double(k, v); }},
        {"workers", [](RunConfig& c, CarrierGrid&, const std::string& k, const json& v) { c.workers = as_int(k, v); }},
    };
    return table;
}

std::uint64_t as_seed(const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError("seed", "expected a non-negative integer");
}

// Validation helpers throw DomainError without a key; attach the section.
template <typename F>
void checked(const char* section, F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        throw ConfigError(section, e.what());
    }
}

} // namespace

void RunConfig::validate() const {
    checked("propagation", [&] { train.propagation.validate(); });
    checked("generation", [&] { train.generation.validate(); });
    checked("reward", [&] { train.reward.validate(); });
    checked("weights", [&] { train.weights.validate(); });
    train.validate();
    if (eval_networks_min < 1) throw ConfigError("eval_networks_min", "must be >= 1");
    if (eval_networks_max < eval_networks_min)
        throw ConfigError("eval_networks_max", "must be >= eval_networks_min");
    if (games_per_n < 1) throw ConfigError("games_per_n", "must be >= 1");
    if (centralized_max_networks < 0) throw ConfigError("centralized_max_networks", "must be >= 0");
    if (workers < 1) throw ConfigError("workers", "must be >= 1");
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.networks_min = eval_networks_min;
    g.networks_max = eval_networks_max;
    g.games_per_n = games_per_n;
    g.decision_points = train.decision_points;
    g.sinr_target_db = train.sinr_target_db;
    g.seed = train.seed;
    g.centralized_max_networks = centralized_max_networks;
    g.propagation = train.propagation;
    g.generation = train.generation;
    g.weights = train.weights;
    g.exec = workers > 1 ? Exec::Parallel : Exec::Serial;
    return g;
}

RunConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object of key/value pairs");

    RunConfig c;
    CarrierGrid grid;
    bool have_seed = false;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key == "seed") {
            c.train.seed = as_seed(it.value());
            have_seed = true;
            continue;
        }
        const auto& table = setters();
        const auto s = table.find(key);
        if (s == table.end()) throw ConfigError(key, "unknown key");
        s->second(c, grid, key, it.value());
    }
    if (seed_override) {
        c.train.seed = *seed_override;
        have_seed = true;
    }
    if (!have_seed) throw ConfigError("seed", "missing required key (or pass --seed)");

    if (grid.channels < 1) throw ConfigError("channels", "must be >= 1");
    if (!(grid.spacing_mhz > 0.0)) throw ConfigError("carrier_spacing_mhz", "must be > 0");
    if (!(grid.first_mhz > 0.0)) throw ConfigError("carrier_first_mhz", "must be > 0");
    c.train.propagation.carrier_mhz =
        PropagationParams::uniform_grid(grid.first_mhz, grid.spacing_mhz, grid.channels);
    c.train.network.channels = grid.channels;

    c.validate();
    return c;
}

RunConfig load_config_file(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<document>", "cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), seed_override);
}

std::string effective_config(const RunConfig& c) {
    const auto& t = c.train;
    const auto& p = t.propagation;
    const auto& g = t.generation;
    nlohmann::ordered_json j;
    j["seed"] = t.seed;
    j["channels"] = p.channel_count();
    j["carrier_first_mhz"] = p.carrier_mhz.front();
    j["carrier_spacing_mhz"] = p.channel_count() > 1 ? p.carrier_mhz[1] - p.carrier_mhz[0] : 2.0;
    j["antenna_gain_tx"] = p.antenna_gain_tx;
    j["antenna_gain_rx"] = p.antenna_gain_rx;
    j["antenna_height_tx_m"] = p.antenna_height_tx_m;
    j["antenna_height_rx_m"] = p.antenna_height_rx_m;
    j["transmit_power_dbw"] = p.transmit_power_dbw;
    j["temperature_k"] = p.temperature_k;
    j["noise_figure_db"] = p.noise_figure_db;
    j["channel_bandwidth_hz"] = p.channel_bandwidth_hz;
    j["center_range_m"] = g.u1_m;
    j["radius_min_m"] = g.x1_m;
    j["radius_max_m"] = g.x2_m;
    j["user_spread_std_m"] = g.user_spread_std_m;
    j["users_min"] = g.users_min;
    j["users_max"] = g.users_max;
    j["sinr_threshold_db"] = t.sinr_target_db;
    j["r_desired"] = t.reward.r_desired;
    j["c1"] = t.reward.c1;
    j["zeta"] = t.reward.zeta;
    j["neighbor_distance_m"] = t.reward.gamma_neighbor_m;
    j["rho"] = t.reward.rho;
    j["alpha"] = t.alpha;
    j["beta"] = t.beta;
    j["masking"] = t.masking;
    j["epsilon_start"] = t.epsilon_start;
    j["epsilon_end"] = t.epsilon_end;
    j["huber_delta"] = t.huber_delta;
    j["episodes"] = t.episodes;
    j["omega_initial"] = t.omega_initial;
    j["omega_final"] = t.omega_final;
    j["gamma"] = t.gamma;
    j["lr_initial"] = t.lr_initial;
    j["lr_final"] = t.lr_final;
    j["adam_beta1"] = t.adam.beta1;
    j["adam_beta2"] = t.adam.beta2;
    j["adam_epsilon"] = t.adam.epsilon;
    j["replay_capacity"] = t.replay_capacity;
    j["decision_points"] = t.decision_points;
    j["hidden_layers"] = 3;
    j["hidden_units"] = t.network.hidden;
    j["skip_connections"] = 2;
    j["leaky_relu_slope"] = t.network.leaky_slope;
    j["updates_per_episode"] = t.updates_per_episode;
    j["batch_size"] = t.batch_size;
    j["train_networks_min"] = t.train_networks_min;
    j["train_networks_max"] = t.train_networks_max;
    j["checkpoint_interval"] = t.checkpoint_interval;
    j["eval_networks_min"] = c.eval_networks_min;
    j["eval_networks_max"] = c.eval_networks_max;
    j["games_per_n"] = c.games_per_n;
    j["centralized_max_networks"] = c.centralized_max_networks;
    j["weight_cq"] = t.weights.cq;
    j["weight_anccs"] = t.weights.anccs;
    j["weight_cts"] = t.weights.cts;
    j["weight_ses"] = t.weights.ses;
    j["workers"] = c.workers;
    return j.dump(2) + "\n";
}

} // namespace carlton
