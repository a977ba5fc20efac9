#include "carlton/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "carlton/errors.hpp"
#include "carlton/observation.hpp"

namespace carlton {

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(key, what);
    };
    require(episodes >= 1, "episodes", "must be >= 1");
    require(decision_points >= 1, "decision_points", "must be >= 1");
    require(updates_per_episode >= 1, "updates_per_episode", "must be >= 1");
    require(batch_size >= 1, "batch_size", "must be >= 1");
    require(replay_capacity >= 1, "replay_capacity", "must be >= 1");
    require(gamma >= 0.0 && gamma < 1.0, "gamma", "must lie in [0, 1)");
    require(huber_delta > 0.0, "huber_delta", "must be > 0");
    require(train_networks_min >= 1, "train_networks_min", "must be >= 1");
    require(train_networks_max >= train_networks_min, "train_networks_max",
            "must be >= train_networks_min");
    require(lr_initial > 0.0, "lr_initial", "must be > 0");
    require(lr_final > 0.0, "lr_final", "must be > 0");
    require(omega_initial > 0.0, "omega_initial", "must be > 0");
    require(omega_final > 0.0, "omega_final", "must be > 0");
    require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start", "must lie in [0, 1]");
    require(epsilon_end >= 0.0 && epsilon_end <= 1.0, "epsilon_end", "must lie in [0, 1]");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0, 1]");
    require(beta > 0.0, "beta", "must be > 0");
    require(network.channels >= 1, "channels", "must be >= 1");
    require(network.hidden >= 1, "hidden_units", "must be >= 1");
    require(network.channels == propagation.channel_count(), "carrier_frequencies_mhz",
            "length must equal channels");
    require(checkpoint_interval >= 0, "checkpoint_interval", "must be >= 0");
    require(adam.beta1 >= 0.0 && adam.beta1 < 1.0, "adam_beta1", "must lie in [0, 1)");
    require(adam.beta2 >= 0.0 && adam.beta2 < 1.0, "adam_beta2", "must lie in [0, 1)");
    require(adam.epsilon > 0.0, "adam_epsilon", "must be > 0");
    propagation.validate();
    generation.validate();
    reward.validate();
    weights.validate();
}

EpisodeOutcome run_episode(const Scenario& scenario, const LinkTable& table,
                           const ValueNetwork& net, const TrainConfig& config, int episode,
                           Rng& rng) {
    const int n = scenario.network_count();
    const int k = table.channel_count();
    std::vector<int> initial(static_cast<std::size_t>(n));
    for (auto& c : initial) c = uniform_int(rng, 0, k - 1);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    return run_episode(scenario, table, net, config, episode, std::move(initial), std::move(order),
                       rng);
}

EpisodeOutcome run_episode(const Scenario& scenario, const LinkTable& table,
                           const ValueNetwork& net, const TrainConfig& config, int episode,
                           std::vector<int> initial_channels, std::vector<int> order, Rng& rng) {
    const int n = scenario.network_count();
    const int rounds = config.decision_points;
    if (static_cast<int>(initial_channels.size()) != n || static_cast<int>(order.size()) != n)
        throw DomainError("run_episode: need one initial channel and one serial slot per network");
    table.check_assignment(initial_channels);

    PolicyParams policy;
    policy.alpha = config.alpha;
    policy.beta = config.beta;
    policy.masking = config.masking;
    policy.epsilon_b = config.epsilon(episode);

    std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        nbrs[static_cast<std::size_t>(i)] =
            neighbors(scenario.centers, i, config.reward.gamma_neighbor_m);

    struct Pending {
        bool has = false;
        std::vector<double> state;
        int action = 0;
        double personal = 0.0;
    };
    std::vector<Pending> pending(static_cast<std::size_t>(n));
    // Neighbor personal rewards posted since each network's last turn.
    std::vector<std::vector<double>> inbox(static_cast<std::size_t>(n));
    std::vector<double> reward_sum(static_cast<std::size_t>(n), 0.0);

    EpisodeOutcome out;
    out.transitions.resize(static_cast<std::size_t>(n));
    std::vector<int> assignment = std::move(initial_channels);
    ChangeTracker tracker(n);

    int step = 0;
    for (int round = 0; round < rounds; ++round) {
        for (int slot = 0; slot < n; ++slot, ++step) {
            const int i = order[static_cast<std::size_t>(slot)];
            const auto ui = static_cast<std::size_t>(i);
            const auto qv = quality_vector(table, assignment, i, config.sinr_target_db, config.exec);
            auto state = build_state(assignment[ui], qv);

            if (pending[ui].has) {
                const double social = social_welfare_reward(inbox[ui]);
                const double r = total_reward(pending[ui].personal, social, config.reward.rho);
                out.transitions[ui].push_back(
                    {std::move(pending[ui].state), pending[ui].action, r, state.values});
                reward_sum[ui] += r;
            }
            inbox[ui].clear();

            const int previous = assignment[ui];
            const int action = select_action(state.values, qv, policy, net, rng, previous);
            const double rp = personal_reward(qv, action, previous, config.reward);
            if (action != previous) tracker.record(i, step);
            assignment[ui] = action;

            pending[ui] = {true, std::move(state.values), action, rp};
            for (int j : nbrs[ui]) inbox[static_cast<std::size_t>(j)].push_back(rp);
        }
    }

    out.decisions = step;
    out.accumulated_reward =
        std::accumulate(reward_sum.begin(), reward_sum.end(), 0.0) / static_cast<double>(n);
    out.report = make_report(table, assignment, tracker, rounds, config.sinr_target_db,
                             config.weights);
    return out;
}

TrainResult train(const TrainConfig& config, const EpisodeCallback& on_episode) {
    config.validate();

    TrainResult result{ValueNetwork(config.network), {}};
    {
        Rng init = make_rng(config.seed, {0x1a17});
        result.net.initialize(init);
    }
    Rng rng = make_rng(config.seed, {0x7a41});
    ReplayMemory grm(config.replay_capacity);
    result.log.reserve(static_cast<std::size_t>(config.episodes));

    for (int episode = 1; episode <= config.episodes; ++episode) {
        const int n = uniform_int(rng, config.train_networks_min, config.train_networks_max);
        const Scenario scenario = generate_scenario(n, config.generation, rng);
        const LinkTable table(scenario, config.propagation);
        auto outcome = run_episode(scenario, table, result.net, config, episode, rng);

        for (auto& local : outcome.transitions)
            for (auto& t : local) grm.push(std::move(t));

        EpisodeLog row;
        row.episode = episode;
        row.n_networks = n;
        row.accumulated_reward = outcome.accumulated_reward;
        row.cq_mean = outcome.report.cq_mean;
        row.cq_median = outcome.report.cq_median;
        row.cq_min = outcome.report.cq_min;
        row.epsilon = config.epsilon(episode);
        row.omega = config.omega(episode);
        row.lr = config.lr(episode);

        AdamParams adam = config.adam;
        adam.learning_rate = row.lr;
        double loss_sum = 0.0;
        int steps = 0;
        if (!grm.empty()) {
            for (int u = 0; u < config.updates_per_episode; ++u) {
                const auto batch = grm.sample(static_cast<std::size_t>(config.batch_size), rng);
                double loss = 0.0;
                try {
                    loss = result.net.train_step(batch, config.gamma, row.omega,
                                                 config.huber_delta, adam);
                } catch (const DivergenceError& e) {
                    std::ostringstream msg;
                    msg << "episode " << episode << ", update " << u + 1 << " (N = " << n
                        << ", lr = " << row.lr << ", omega = " << row.omega << "): " << e.what();
                    throw DivergenceError(msg.str());
                }
                loss_sum += loss;
                row.loss_max = std::max(row.loss_max, loss);
                ++steps;
            }
        }
        row.loss_mean = steps > 0 ? loss_sum / steps : 0.0;
        row.replay_size = grm.size();

        result.log.push_back(row);
        if (on_episode) on_episode(row, result.net);
    }
    return result;
}

void write_log_header(std::ostream& out) {
    out << "episode,n_networks,accumulated_reward,cq_mean,cq_median,cq_min,loss_mean,loss_max,"
           "epsilon,omega,lr,replay_size\n";
}

void write_log_row(std::ostream& out, const EpisodeLog& r) {
    const auto old = out.precision(12);
    out << r.episode << ',' << r.n_networks << ',' << r.accumulated_reward << ',' << r.cq_mean
        << ',' << r.cq_median << ',' << r.cq_min << ',' << r.loss_mean << ',' << r.loss_max << ','
        << r.epsilon << ',' << r.omega << ',' << r.lr << ',' << r.replay_size << '\n';
    out.precision(old);
}

double window_mean_reward(const std::vector<EpisodeLog>& log, int first, int last) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : log) {
        if (r.episode < first || r.episode > last) continue;
        sum += r.accumulated_reward;
        ++count;
    }
    if (count == 0) throw DomainError("window_mean_reward: empty episode window");
    return sum / count;
}

} // namespace carlton
