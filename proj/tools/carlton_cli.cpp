// carlton: train, evaluate and inspect distributed channel-allocation agents.
//
// Exit codes: 0 success, 1 usage, 2 validation, 3 training divergence.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "carlton/app.hpp"
#include "carlton/config.hpp"
#include "carlton/errors.hpp"
#include "carlton/exec.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kDivergence = 3 };

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "flat JSON config (defaults to the built-in values)");
    cmd->add_option("--seed", c.seed, "master seed; overrides the config");
    cmd->add_option("--workers", c.workers, "OpenMP workers for evaluation grids (1 = serial)")
        ->check(CLI::PositiveNumber);
}

carlton::RunConfig resolve(const Common& c, std::optional<std::uint64_t> fallback_seed = {}) {
    auto seed = c.seed ? c.seed : fallback_seed;
    carlton::RunConfig cfg = c.config_path.empty() ? carlton::parse_config("{}", seed)
                                                   : carlton::load_config_file(c.config_path, seed);
    if (c.workers) cfg.workers = *c.workers;
    cfg.validate();
    carlton::set_worker_count(cfg.workers);
    return cfg;
}

// "2..15", "2:15" or a single "7".
std::pair<int, int> parse_range(const std::string& text) {
    for (const char* sep : {"..", ":", "-"}) {
        const auto pos = text.find(sep);
        if (pos != std::string::npos)
            return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + std::string(sep).size()))};
    }
    const int v = std::stoi(text);
    return {v, v};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed dynamic channel allocation with cooperative multi-agent Q-learning"};
    app.require_subcommand(1);

    Common train_opts;
    std::string train_out;
    std::optional<int> train_episodes;
    auto* train = app.add_subcommand("train", "train the shared value network");
    add_common(train, train_opts);
    train->add_option("--out", train_out, "output directory")->required();
    train->add_option("--episodes", train_episodes, "override the number of training episodes")
        ->check(CLI::PositiveNumber);

    Common eval_opts;
    std::string eval_out, checkpoint, policies = "carlton,ra,jar,centralized", phi = "none", n_range;
    std::optional<int> games_per_n;
    auto* eval = app.add_subcommand("eval", "evaluate policies on the paired-seed game grid");
    add_common(eval, eval_opts);
    eval->add_option("--out", eval_out, "output directory")->required();
    eval->add_option("--checkpoint", checkpoint, "trained network (needed for 'carlton')");
    eval->add_option("--policies", policies, "comma list of carlton, ra, jar, centralized");
    eval->add_option("--phi", phi, "comma list of switch margins; 'none' or 0 disables");
    eval->add_option("--n-range", n_range, "network counts, e.g. 2..15");
    eval->add_option("--games-per-n", games_per_n, "games per network count")->check(CLI::PositiveNumber);

    Common inspect_opts;
    std::string scenario_path;
    auto* inspect = app.add_subcommand("inspect", "print a scenario file in readable form");
    add_common(inspect, inspect_opts);
    inspect->add_option("scenario", scenario_path, "scenario JSON file")->required();

    Common gen_opts;
    std::string gen_out;
    int gen_networks = 0;
    auto* generate = app.add_subcommand("generate", "sample a scenario and write it as JSON");
    add_common(generate, gen_opts);
    generate->add_option("--networks", gen_networks, "number of networks")->required()
        ->check(CLI::PositiveNumber);
    generate->add_option("--out", gen_out, "scenario file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (train->parsed()) {
            auto cfg = resolve(train_opts);
            if (train_episodes) cfg.train.episodes = *train_episodes;
            cfg.validate();
            carlton::cmd_train(cfg, train_out, std::cout);
        } else if (eval->parsed()) {
            auto cfg = resolve(eval_opts);
            if (!n_range.empty()) {
                try {
                    std::tie(cfg.eval_networks_min, cfg.eval_networks_max) = parse_range(n_range);
                } catch (const std::exception&) {
                    throw carlton::ConfigError("n-range", "expected LO..HI, got '" + n_range + "'");
                }
            }
            if (games_per_n) cfg.games_per_n = *games_per_n;
            cfg.validate();
            carlton::EvalRequest req;
            req.policies = carlton::parse_policy_list(policies);
            req.phi = carlton::parse_phi_list(phi);
            if (!checkpoint.empty()) req.checkpoint = checkpoint;
            carlton::cmd_eval(cfg, req, eval_out, std::cout);
        } else if (inspect->parsed()) {
            carlton::cmd_inspect(scenario_path, resolve(inspect_opts, 0), std::cout);
        } else if (generate->parsed()) {
            const auto s = carlton::cmd_generate(resolve(gen_opts), gen_networks, gen_out);
            std::cout << "wrote " << s.network_count() << "-network scenario to " << gen_out << '\n';
        }
    } catch (const carlton::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kValidation;
    } catch (const carlton::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kValidation;
    } catch (const carlton::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const carlton::SizeError& e) {
        std::cerr << "size error: " << e.what() << '\n';
        return kValidation;
    } catch (const carlton::DivergenceError& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
