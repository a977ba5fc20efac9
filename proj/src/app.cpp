#include "carlton/app.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "carlton/agent.hpp"
#include "carlton/baselines.hpp"
#include "carlton/errors.hpp"
#include "carlton/reward.hpp"

namespace carlton {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) parts.push_back(item.substr(b, e - b + 1));
    }
    return parts;
}

} // namespace

TrainResult cmd_train(const RunConfig& config, const fs::path& out_dir, std::ostream& progress) {
    config.validate();
    fs::create_directories(out_dir);
    write_text(out_dir / "effective_config.json", effective_config(config));

    auto log = open_out(out_dir / "train_log.csv");
    write_log_header(log);
    const int interval = config.train.checkpoint_interval;
    if (interval > 0) fs::create_directories(out_dir / "checkpoints");

    const int report_every = std::max(1, config.train.episodes / 20);
    auto result = train(config.train, [&](const EpisodeLog& row, const ValueNetwork& net) {
        write_log_row(log, row);
        if (interval > 0 && row.episode % interval == 0)
            net.save((out_dir / "checkpoints" / ("episode_" + std::to_string(row.episode) + ".json")).string());
        if (row.episode % report_every == 0 || row.episode == config.train.episodes)
            progress << "episode " << row.episode << '/' << config.train.episodes
                     << "  N=" << row.n_networks << "  reward=" << std::fixed << std::setprecision(3)
                     << row.accumulated_reward << "  cq_mean=" << row.cq_mean
                     << "  loss=" << std::setprecision(5) << row.loss_mean << std::defaultfloat
                     << '\n';
    });
    log.close();
    result.net.save((out_dir / "checkpoint.json").string());
    return result;
}

std::vector<std::optional<double>> parse_phi_list(const std::string& text) {
    std::vector<std::optional<double>> out;
    for (const auto& item : split(text)) {
        if (item == "none" || item == "None") {
            out.emplace_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !(v >= 0.0)) throw ConfigError("phi", "bad value '" + item + "'");
        if (v == 0.0) out.emplace_back(std::nullopt);
        else out.emplace_back(v);
    }
    if (out.empty()) throw ConfigError("phi", "empty list");
    return out;
}

std::vector<std::string> parse_policy_list(const std::string& text) {
    auto out = split(text);
    for (const auto& p : out)
        if (p != "carlton" && p != "ra" && p != "jar" && p != "centralized")
            throw ConfigError("policies", "unknown policy '" + p + "' (carlton, ra, jar, centralized)");
    if (out.empty()) throw ConfigError("policies", "empty list");
    return out;
}

GridReport cmd_eval(const RunConfig& config, const EvalRequest& request, const fs::path& out_dir,
                    std::ostream& progress) {
    config.validate();
    const GridSpec spec = config.grid();
    const auto carriers = config.train.propagation.carrier_mhz;
    const double target = config.train.sinr_target_db;

    std::vector<NamedPolicy> policies;
    for (const auto& name : request.policies) {
        if (name == "carlton") {
            if (!request.checkpoint)
                throw ConfigError("checkpoint", "policy 'carlton' needs a trained checkpoint");
            auto net = std::make_shared<const ValueNetwork>(ValueNetwork::load(request.checkpoint->string()));
            if (net->shape().channels != spec.propagation.channel_count())
                throw ConfigError("checkpoint", "network was trained for " +
                                                    std::to_string(net->shape().channels) +
                                                    " channels but the config has " +
                                                    std::to_string(spec.propagation.channel_count()));
            for (const auto& phi : request.phi) {
                PolicyParams params;
                params.greedy = true;
                params.masking = config.train.masking;
                params.phi = phi;
                const std::string label = CarltonPolicy(net, params).name();
                policies.push_back({label, [net, params] { return std::make_unique<CarltonPolicy>(net, params); }, false});
            }
        } else if (name == "ra") {
            policies.push_back({"ra", [] { return std::make_unique<RandomAgentPolicy>(); }, false});
        } else if (name == "jar") {
            policies.push_back({"jar", [carriers] { return std::make_unique<JarPolicy>(carriers); }, false});
        } else if (name == "centralized") {
            policies.push_back({"centralized", [target] { return std::make_unique<CentralizedPolicy>(target); }, true});
        } else {
            throw ConfigError("policies", "unknown policy '" + name + "'");
        }
    }

    progress << "evaluating " << policies.size() << " policies on " << spec.game_count()
             << " games (N " << spec.networks_min << ".." << spec.networks_max << ")\n";
    auto report = evaluate_grid(policies, spec);
    for (const auto& w : report.warnings) progress << "warning: " << w << '\n';

    fs::create_directories(out_dir);
    write_text(out_dir / "effective_config.json", effective_config(config));
    write_grid_artifacts(out_dir, report, spec);

    for (const auto& p : report.policies) {
        const auto a = aggregate(report, p);
        progress << std::left << std::setw(22) << p << std::right << std::fixed << std::setprecision(4)
                 << " games=" << a.episodes << "  E[(CQ+minCQ)/2]=" << a.cq_combined
                 << "  WS=" << a.ws << "  CTS=" << a.cts << std::defaultfloat << '\n';
    }
    return report;
}

void cmd_inspect(const fs::path& scenario_path, const RunConfig& config, std::ostream& out) {
    const Scenario s = load_scenario_file(scenario_path.string());
    const auto& prop = config.train.propagation;
    const double target = config.train.sinr_target_db;
    const double gamma = config.train.reward.gamma_neighbor_m;
    const LinkTable table(s, prop);
    const int n = s.network_count();
    const int k = table.channel_count();

    out << std::fixed << std::setprecision(1);
    out << "scenario seed " << s.seed << ": " << n << " networks, " << s.total_users() << " users\n\n";
    for (int i = 0; i < n; ++i) {
        const auto& net = s.networks[static_cast<std::size_t>(i)];
        const auto& m = net.users[static_cast<std::size_t>(net.manager)];
        const auto& c = s.centers[static_cast<std::size_t>(i)];
        out << "network " << i << "  center (" << c.x << ", " << c.y << ")  users " << net.user_count()
            << "  manager user " << net.manager << " at (" << m.x << ", " << m.y << ")\n";
    }

    out << "\ncenter distances [m]\n      ";
    for (int j = 0; j < n; ++j) out << std::setw(8) << j;
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << std::setw(6) << i;
        for (int j = 0; j < n; ++j)
            out << std::setw(8)
                << distance(s.centers[static_cast<std::size_t>(i)], s.centers[static_cast<std::size_t>(j)]);
        out << '\n';
    }

    out << "\nneighbors within " << gamma << " m\n";
    for (int i = 0; i < n; ++i) {
        out << "network " << i << ":";
        const auto nb = neighbors(s.centers, i, gamma);
        if (nb.empty()) out << " none";
        for (int j : nb) out << ' ' << j;
        out << '\n';
    }

    // Quality each network would see alone in the world.
    out << "\nisolated QV (SINR target " << target << " dB)\nnetwork";
    out << std::setprecision(2);
    for (int c = 0; c < k; ++c) out << std::setw(7) << prop.carrier_mhz[static_cast<std::size_t>(c)];
    out << '\n';
    for (int i = 0; i < n; ++i) {
        out << std::setw(7) << i;
        const int m = table.user_count(i);
        for (int c = 0; c < k; ++c) {
            int good = 0;
            for (int u = 0; u < m; ++u)
                if (linear_to_db(table.signal(c, table.global_user(i, u)) / table.noise_watts()) > target)
                    ++good;
            out << std::setw(7) << static_cast<double>(good) / m;
        }
        out << '\n';
    }
    out << std::defaultfloat;
}

Scenario cmd_generate(const RunConfig& config, int n_networks, const fs::path& out) {
    if (n_networks < 1) throw ConfigError("networks", "must be >= 1");
    const Scenario s = generate_scenario(n_networks, config.train.generation, config.train.seed);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_scenario_file(s, out.string());
    return s;
}

} // namespace carlton
