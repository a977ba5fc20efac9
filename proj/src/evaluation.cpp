#include "carlton/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "carlton/errors.hpp"
#include "carlton/link_table.hpp"
#include "carlton/rng.hpp"

namespace carlton {

void GridSpec::validate() const {
    if (networks_min < 1) throw ConfigError("n_range", "smallest network count must be >= 1");
    if (networks_max < networks_min) throw ConfigError("n_range", "upper bound below lower bound");
    if (games_per_n < 1) throw ConfigError("games_per_n", "must be >= 1");
    if (decision_points < 1) throw ConfigError("decision_points", "must be >= 1");
    if (centralized_max_networks < 0)
        throw ConfigError("centralized_max_networks", "must be >= 0");
    propagation.validate();
    generation.validate();
    weights.validate();
}

std::uint64_t game_seed(std::uint64_t master, int n_networks, int game) {
    Rng rng = make_rng(master, {0x6a3e, static_cast<std::uint64_t>(n_networks),
                                static_cast<std::uint64_t>(game)});
    return rng();
}

GameSetup make_game(const GridSpec& spec, int n_networks, int game) {
    GameSetup g;
    g.n_networks = n_networks;
    g.game = game;
    g.seed = game_seed(spec.seed, n_networks, game);
    g.scenario = generate_scenario(n_networks, spec.generation, g.seed);

    Rng rng = make_rng(g.seed, {0x1c});
    const int k = spec.propagation.channel_count();
    g.initial_channels.resize(static_cast<std::size_t>(n_networks));
    for (auto& c : g.initial_channels) c = uniform_int(rng, 0, k - 1);
    g.order.resize(static_cast<std::size_t>(n_networks));
    std::iota(g.order.begin(), g.order.end(), 0);
    std::shuffle(g.order.begin(), g.order.end(), rng);
    return g;
}

EpisodeReport play_episode(const Scenario& scenario, const LinkTable& table, Policy& policy,
                           std::vector<int> assignment, const std::vector<int>& order,
                           int decision_points, double sinr_target_db,
                           const ScoreWeights& weights) {
    const int n = scenario.network_count();
    if (static_cast<int>(assignment.size()) != n || static_cast<int>(order.size()) != n)
        throw DomainError("play_episode: need one initial channel and one serial slot per network");
    table.check_assignment(assignment);

    policy.begin_episode(scenario, table, assignment);
    ChangeTracker tracker(n);
    int step = 0;
    for (int round = 0; round < decision_points; ++round) {
        for (int slot = 0; slot < n; ++slot, ++step) {
            const int i = order[static_cast<std::size_t>(slot)];
            const auto ui = static_cast<std::size_t>(i);
            const auto qv = quality_vector(table, assignment, i, sinr_target_db);
            TurnContext turn{i, round, step, assignment[ui], qv};
            const int action = policy.decide(turn);
            if (action < 0 || action >= table.channel_count())
                throw DomainError("play_episode: policy '" + policy.name() +
                                  "' returned an invalid channel");
            if (action != assignment[ui]) {
                tracker.record(i, step);
                assignment[ui] = action;
            }
        }
    }
    return make_report(table, assignment, tracker, decision_points, sinr_target_db, weights);
}

GridReport evaluate_grid(const std::vector<NamedPolicy>& policies, const GridSpec& spec) {
    spec.validate();
    const int n_games = spec.game_count();
    const auto parallel = spec.exec == Exec::Parallel;

    std::vector<GameSetup> setups(static_cast<std::size_t>(n_games));
    std::vector<std::unique_ptr<LinkTable>> tables(static_cast<std::size_t>(n_games));
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int g = 0; g < n_games; ++g) {
        const int n = spec.networks_min + g / spec.games_per_n;
        setups[static_cast<std::size_t>(g)] = make_game(spec, n, g % spec.games_per_n);
        tables[static_cast<std::size_t>(g)] =
            std::make_unique<LinkTable>(setups[static_cast<std::size_t>(g)].scenario, spec.propagation);
    }

    GridReport report;
    struct Task {
        std::size_t policy;
        int game;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < policies.size(); ++p) {
        report.policies.push_back(policies[p].name);
        bool skipped = false;
        for (int g = 0; g < n_games; ++g) {
            if (policies[p].centralized &&
                setups[static_cast<std::size_t>(g)].n_networks > spec.centralized_max_networks) {
                skipped = true;
                continue;
            }
            tasks.push_back({p, g});
        }
        if (skipped)
            report.warnings.push_back("policy '" + policies[p].name +
                                      "' skipped for N > " +
                                      std::to_string(spec.centralized_max_networks) +
                                      " (centralized search budget)");
    }

    report.games.resize(tasks.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const auto& task = tasks[t];
        const auto& setup = setups[static_cast<std::size_t>(task.game)];
        auto policy = policies[task.policy].make();
        GameResult r;
        r.policy = policies[task.policy].name;
        r.n_networks = setup.n_networks;
        r.game = setup.game;
        r.seed = setup.seed;
        r.report = play_episode(setup.scenario, *tables[static_cast<std::size_t>(task.game)], *policy,
                                setup.initial_channels, setup.order, spec.decision_points,
                                spec.sinr_target_db, spec.weights);
        report.games[t] = std::move(r);
    }
    return report;
}

Aggregate aggregate(const GridReport& report, const std::string& policy, int n_lo, int n_hi) {
    Aggregate a;
    for (const auto& g : report.games) {
        if (g.policy != policy || g.n_networks < n_lo || g.n_networks > n_hi) continue;
        const auto& r = g.report;
        ++a.episodes;
        a.cq_mean += r.cq_mean;
        a.cq_median += r.cq_median;
        a.cq_min += r.cq_min;
        a.cq_combined += r.cq_combined();
        a.anccs += r.anccs;
        a.cts += r.cts;
        a.ses += r.ses;
        a.ws += r.ws;
    }
    if (a.episodes > 0) {
        const double d = a.episodes;
        for (double* v : {&a.cq_mean, &a.cq_median, &a.cq_min, &a.cq_combined, &a.anccs, &a.cts,
                          &a.ses, &a.ws})
            *v /= d;
    }
    return a;
}

void write_results_csv(std::ostream& out, const GridReport& report) {
    out << "policy,n_networks,seed,cq_mean,cq_median,cq_min,anccs,cts,ses,ws\n";
    const auto old = out.precision(12);
    for (const auto& g : report.games) {
        const auto& r = g.report;
        out << g.policy << ',' << g.n_networks << ',' << g.seed << ',' << r.cq_mean << ','
            << r.cq_median << ',' << r.cq_min << ',' << r.anccs << ',' << r.cts << ',' << r.ses
            << ',' << r.ws << '\n';
    }
    out.precision(old);
}

namespace {

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
    nlohmann::ordered_json j;
    j["episodes"] = a.episodes;
    j["cq_mean"] = a.cq_mean;
    j["cq_median"] = a.cq_median;
    j["cq_min"] = a.cq_min;
    j["cq_combined"] = a.cq_combined;
    j["anccs"] = a.anccs;
    j["cts"] = a.cts;
    j["ses"] = a.ses;
    j["ws"] = a.ws;
    return j;
}

// One row per N, one column per policy; empty cell where a policy did not run.
void write_by_n(const std::filesystem::path& path, const GridReport& report, const GridSpec& spec,
                const std::vector<std::string>& policies, double Aggregate::*field) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "n_networks";
    for (const auto& p : policies) out << ',' << p;
    out << '\n' << std::setprecision(12);
    for (int n = spec.networks_min; n <= spec.networks_max; ++n) {
        out << n;
        for (const auto& p : policies) {
            const auto a = aggregate(report, p, n, n);
            out << ',';
            if (a.episodes > 0) out << a.*field;
        }
        out << '\n';
    }
}

} // namespace

std::string summary_json(const GridReport& report, const GridSpec& spec) {
    nlohmann::ordered_json root;
    root["seed"] = spec.seed;
    root["networks_min"] = spec.networks_min;
    root["networks_max"] = spec.networks_max;
    root["games_per_n"] = spec.games_per_n;
    root["decision_points"] = spec.decision_points;
    root["warnings"] = report.warnings;
    auto& pol = root["policies"];
    pol = nlohmann::ordered_json::object();
    for (const auto& p : report.policies) {
        nlohmann::ordered_json entry;
        entry["overall"] = aggregate_json(aggregate(report, p));
        auto& per_n = entry["per_n"];
        per_n = nlohmann::ordered_json::object();
        for (int n = spec.networks_min; n <= spec.networks_max; ++n) {
            const auto a = aggregate(report, p, n, n);
            if (a.episodes > 0) per_n[std::to_string(n)] = aggregate_json(a);
        }
        pol[p] = std::move(entry);
    }
    return root.dump(2) + "\n";
}

void write_grid_artifacts(const std::filesystem::path& dir, const GridReport& report,
                          const GridSpec& spec) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "results.csv");
        if (!out) throw std::runtime_error("cannot write " + (dir / "results.csv").string());
        write_results_csv(out, report);
    }
    {
        std::ofstream out(dir / "summary.json");
        out << summary_json(report, spec);
    }

    write_by_n(dir / "fig10_ws_by_n.csv", report, spec, report.policies, &Aggregate::ws);
    write_by_n(dir / "fig11_cq_combined_by_n.csv", report, spec, report.policies,
               &Aggregate::cq_combined);
    write_by_n(dir / "fig11b_cts_by_n.csv", report, spec, report.policies, &Aggregate::cts);
    {
        std::ofstream out(dir / "fig12_cq_combined_overall.csv");
        out << "policy,cq_combined\n" << std::setprecision(12);
        for (const auto& p : report.policies) out << p << ',' << aggregate(report, p).cq_combined << '\n';
    }

    // The phi sweep: every CARLTON variant side by side.
    std::vector<std::string> variants;
    for (const auto& p : report.policies)
        if (p.rfind("carlton", 0) == 0) variants.push_back(p);
    if (variants.size() > 1) {
        write_by_n(dir / "fig08_ws_by_n_phi.csv", report, spec, variants, &Aggregate::ws);
        write_by_n(dir / "fig09_cq_combined_by_n_phi.csv", report, spec, variants,
                   &Aggregate::cq_combined);
    }
}

} // namespace carlton
