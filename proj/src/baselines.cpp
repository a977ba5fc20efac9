#include "carlton/baselines.hpp"

#include <cmath>
#include <limits>

#include "carlton/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carlton {

int random_agent_init(int channels, Rng& rng) {
    if (channels < 1) throw DomainError("random_agent_init: need at least one channel");
    return uniform_int(rng, 0, channels - 1);
}

int jar_step(std::span<const double> qv, int current_channel, std::span<const double> carrier_mhz,
             double margin, double span_mhz) {
    const int k = static_cast<int>(qv.size());
    if (current_channel < 0 || current_channel >= k || carrier_mhz.size() != qv.size())
        throw DomainError("jar_step: channel out of range or carrier list mismatch");

    const double f0 = carrier_mhz[static_cast<std::size_t>(current_channel)];
    int best = -1;
    bool tied = false;
    for (int c = 0; c < k; ++c) {
        if (c == current_channel) continue;
        if (std::abs(carrier_mhz[static_cast<std::size_t>(c)] - f0) > span_mhz + 1e-9) continue;
        if (best < 0 || qv[static_cast<std::size_t>(c)] > qv[static_cast<std::size_t>(best)]) {
            best = c;
            tied = false;
        } else if (qv[static_cast<std::size_t>(c)] == qv[static_cast<std::size_t>(best)]) {
            tied = true;
        }
    }
    if (best < 0 || tied) return current_channel;
    // QV entries are fractions of small integers; the slack keeps 0.35 - 0.3 a 0.05 gain.
    const double gain = qv[static_cast<std::size_t>(best)] - qv[static_cast<std::size_t>(current_channel)];
    return gain >= margin - 1e-12 ? best : current_channel;
}

double assignment_objective(const LinkTable& table, std::span<const int> assignment,
                            double sinr_target_db) {
    const int n = table.network_count();
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += channel_quality(table, assignment, i, assignment[static_cast<std::size_t>(i)],
                               sinr_target_db);
    return sum / n;
}

namespace {

std::uint64_t checked_power(int base, int exponent, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (int i = 0; i < exponent; ++i) {
        if (r > cap / static_cast<std::uint64_t>(base)) return cap + 1;
        r *= static_cast<std::uint64_t>(base);
    }
    return r;
}

void decode(std::uint64_t index, int k, std::vector<int>& a) {
    // Last network is the least significant digit, so increasing index is
    // lexicographic order over assignments.
    for (std::size_t i = a.size(); i-- > 0;) {
        a[i] = static_cast<int>(index % static_cast<std::uint64_t>(k));
        index /= static_cast<std::uint64_t>(k);
    }
}

void increment(std::vector<int>& a, int k) {
    for (std::size_t i = a.size(); i-- > 0;) {
        if (++a[i] < k) return;
        a[i] = 0;
    }
}

CentralizedResult exhaustive(const LinkTable& table, double target, std::uint64_t total, Exec exec) {
    const int k = table.channel_count();
    const int n = table.network_count();

    struct Best {
        double objective = -1.0;
        std::uint64_t index = 0;
    };
    std::vector<Best> per_thread(static_cast<std::size_t>(exec == Exec::Parallel ? worker_count() : 1));

#pragma omp parallel if (exec == Exec::Parallel) num_threads(static_cast<int>(per_thread.size()))
    {
        int tid = 0;
        int threads = 1;
#ifdef _OPENMP
        tid = omp_get_thread_num();
        threads = omp_get_num_threads();
#endif
        const std::uint64_t chunk = (total + threads - 1) / threads;
        const std::uint64_t begin = std::min(total, chunk * tid);
        const std::uint64_t end = std::min(total, begin + chunk);
        Best best;
        std::vector<int> a(static_cast<std::size_t>(n));
        if (begin < end) decode(begin, k, a);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            const double obj = assignment_objective(table, a, target);
            if (obj > best.objective) best = {obj, idx};
            increment(a, k);
        }
        per_thread[static_cast<std::size_t>(tid)] = best;
    }

    // Threads own ascending index blocks, so strict '>' keeps the lowest index.
    Best best;
    for (const auto& b : per_thread)
        if (b.objective > best.objective) best = b;

    CentralizedResult r;
    r.assignment.assign(static_cast<std::size_t>(n), 0);
    decode(best.index, k, r.assignment);
    r.objective = assignment_objective(table, r.assignment, target);
    r.exhaustive = true;
    r.nodes_visited = total;
    return r;
}

// Quality of `network` on `channel` when only networks [0, depth) interfere.
// Interference only lowers SINR, so this bounds the final quality from above.
double partial_quality(const LinkTable& table, std::span<const int> a, int depth, int network,
                       int channel, double target) {
    const int m = table.user_count(network);
    int count = 0;
    for (int u = 0; u < m; ++u) {
        const int j = table.global_user(network, u);
        double interference = 0.0;
        for (int l = 0; l < depth; ++l) {
            if (l == network) continue;
            interference += table.incoming(channel, j, l) *
                            table.attenuation(channel, a[static_cast<std::size_t>(l)]);
        }
        const double sinr = table.signal(channel, j) / (table.noise_watts() + interference);
        if (linear_to_db(sinr) > target) ++count;
    }
    return static_cast<double>(count) / m;
}

struct BranchAndBound {
    const LinkTable& table;
    double target;
    std::uint64_t budget;
    int n;
    int k;
    std::vector<int> a;
    std::vector<int> best_a;
    double best = -1.0;
    std::uint64_t nodes = 0;

    double bound(int depth) const {
        double sum = 0.0;
        for (int i = 0; i < depth; ++i)
            sum += partial_quality(table, a, depth, i, a[static_cast<std::size_t>(i)], target);
        for (int i = depth; i < n; ++i) {
            double top = 0.0;
            for (int c = 0; c < k && top < 1.0; ++c)
                top = std::max(top, partial_quality(table, a, depth, i, c, target));
            sum += top;
        }
        return sum / n;
    }

    void search(int depth) {
        if (++nodes > budget)
            throw SizeError("centralized search exceeded its node budget of " +
                            std::to_string(budget) + "; use fewer networks or the distributed policies");
        if (depth == n) {
            const double obj = assignment_objective(table, a, target);
            if (obj > best) {
                best = obj;
                best_a = a;
            }
            return;
        }
        for (int c = 0; c < k; ++c) {
            a[static_cast<std::size_t>(depth)] = c;
            // Values are multiples of 1/(M N); the slack only absorbs rounding.
            if (bound(depth + 1) <= best + 1e-12) continue;
            search(depth + 1);
        }
    }
};

} // namespace

CentralizedResult centralized_optimum(const LinkTable& table, double sinr_target_db,
                                      const CentralizedOptions& options) {
    const int n = table.network_count();
    const int k = table.channel_count();
    if (n < 1 || k < 1) throw DomainError("centralized_optimum: empty scenario");

    const std::uint64_t total = checked_power(k, n, options.exhaustive_limit);
    const bool small = total <= options.exhaustive_limit;
    if (options.mode == SearchMode::Exhaustive && !small)
        throw SizeError("centralized search: K^N exceeds the exhaustive limit of " +
                        std::to_string(options.exhaustive_limit));
    if (options.mode == SearchMode::Exhaustive || (options.mode == SearchMode::Auto && small))
        return exhaustive(table, sinr_target_db, total, options.exec);

    BranchAndBound bb{table, sinr_target_db, options.node_budget, n, k,
                      std::vector<int>(static_cast<std::size_t>(n), 0), {}, -1.0, 0};
    bb.search(0);
    CentralizedResult r;
    r.assignment = bb.best_a;
    r.objective = bb.best;
    r.exhaustive = false;
    r.nodes_visited = bb.nodes;
    return r;
}

void CentralizedPolicy::begin_episode(const Scenario&, const LinkTable& table,
                                      std::span<const int>) {
    plan_ = centralized_optimum(table, target_, options_);
}

} // namespace carlton
