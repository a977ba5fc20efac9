// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Optional argument: scratch directory for run output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "carlton/agent.hpp"
#include "carlton/app.hpp"
#include "carlton/baselines.hpp"
#include "carlton/config.hpp"
#include "carlton/evaluation.hpp"
#include "carlton/link_table.hpp"
#include "carlton/neural.hpp"
#include "carlton/propagation.hpp"
#include "carlton/reward.hpp"
#include "carlton/training.hpp"

using namespace carlton;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, Verdict& v) {
    std::printf("%s criterion %d: %s:%s\n", v.ok ? "PASS" : "FAIL", id, title.c_str(),
                v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.ok) ++failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------

void criterion_1() {
    Verdict v;
    const auto p = PropagationParams::defaults();
    const double noise = thermal_noise(p).dbm;
    v.detail << " noise " << noise << " dBm";
    v.require(std::abs(noise - (-104.9)) <= 0.1, "thermal noise -104.9 +/- 0.1 dBm");

    v.require(egli_path_loss_db(1.0, 40.0, 1, 1, 1, 1) == 0.0, "egli zero case");
    const double a = egli_path_loss_db(1000.0, 208.0, 1, 1, 1, 1);
    const double b = egli_path_loss_db(100.0, 226.0, 1, 1, 1, 1);
    v.detail << ", egli " << a << " / " << b;
    v.require(std::abs(a - 134.32) <= 0.01, "egli(1000 m, 208 MHz) = 134.32");
    v.require(std::abs(b - 95.04) <= 0.01, "egli(100 m, 226 MHz) = 95.04");

    // Inter-carrier attenuation by grid distance; beyond four steps the
    // relative carrier spacing decides between 95 and 110 dB.
    int exact = 0;
    for (int k = 0; k < 10; ++k)
        for (int kt = 0; kt < 10; ++kt) {
            const int gap = std::abs(k - kt);
            static const double near[] = {0, 20, 40, 50, 60};
            const double fk = 208.0 + 2.0 * k, fkt = 208.0 + 2.0 * kt;
            const double want = gap <= 4 ? near[gap] : (std::abs(fk - fkt) / fk <= 0.05 ? 95.0 : 110.0);
            if (ici_attenuation_db(k, kt, p.carrier_mhz) == want) ++exact;
        }
    v.detail << ", ICI table " << exact << "/100 exact";
    v.require(exact == 100, "ICI table exact for all 100 pairs");
    report(1, "propagation golden values", v);
}

// ---------------------------------------------------------------------------

std::pair<std::vector<int>, double> enumerate(const LinkTable& table, double target) {
    const int n = table.network_count(), k = table.channel_count();
    std::vector<int> a(static_cast<std::size_t>(n), 0), best;
    double best_obj = -1.0;
    while (true) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += quality_vector(table, a, i, target)[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])];
        if (sum / n > best_obj) {
            best_obj = sum / n;
            best = a;
        }
        int pos = n - 1;
        while (pos >= 0 && ++a[static_cast<std::size_t>(pos)] == k) a[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return {best, best_obj};
}

void criterion_2() {
    Verdict v;
    auto p = PropagationParams::defaults();
    p.carrier_mhz = PropagationParams::uniform_grid(208.0, 2.0, 5);
    GenerationParams g;
    g.u1_m = 80;
    g.x2_m = 300;
    Rng rng = make_rng(0xacc2);
    int matched = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + rep % 3;
        const auto s = generate_scenario(n, g, rng);
        const LinkTable table(s, p);
        const auto oracle = enumerate(table, 4.0);
        bool same = true;
        for (auto mode : {SearchMode::Auto, SearchMode::BranchAndBound}) {
            CentralizedOptions opt;
            opt.mode = mode;
            const auto r = centralized_optimum(table, 4.0, opt);
            same = same && r.objective == oracle.second &&
                   assignment_objective(table, r.assignment, 4.0) == oracle.second;
        }
        if (same) ++matched;
    }
    v.detail << " " << matched << "/50 scenarios equal enumeration";
    v.require(matched == 50, "exact match on every scenario");
    report(2, "centralized optimum vs exhaustive enumeration", v);
}

// ---------------------------------------------------------------------------

TrainBatch random_batch(int rows, int k, Rng& rng) {
    TrainBatch b;
    b.size = rows;
    b.state_size = 2 * k;
    for (int r = 0; r < rows; ++r) {
        const int c = uniform_int(rng, 0, k - 1), c2 = uniform_int(rng, 0, k - 1);
        for (int i = 0; i < k; ++i) b.states.push_back(i == c ? 1.0 : 0.0);
        for (int i = 0; i < k; ++i) b.states.push_back(uniform01(rng));
        for (int i = 0; i < k; ++i) b.next_states.push_back(i == c2 ? 1.0 : 0.0);
        for (int i = 0; i < k; ++i) b.next_states.push_back(uniform01(rng));
        b.actions.push_back(uniform_int(rng, 0, k - 1));
        b.rewards.push_back(-1.0 + 5.0 * uniform01(rng));
    }
    return b;
}

void criterion_3() {
    Verdict v;
    Rng rng = make_rng(0xacc3);

    ValueNetwork net(MlpShape{4, 12, 0.2});
    net.initialize(rng);
    for (int l = 0; l < ValueNetwork::kLayers; ++l)
        for (auto& b : net.biases(l)) b = 0.2 * (uniform01(rng) - 0.5);
    const auto batch = random_batch(8, 4, rng);
    std::vector<double> targets(8);
    for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = (i % 2 ? 2.5 : -0.3) * uniform01(rng);
    std::vector<double> grad;
    net.loss_and_gradient(batch, targets, 1.0, grad);
    double worst = 0.0;
    const double h = 1e-6;
    for (std::size_t i = 0; i < net.parameter_count(); ++i) {
        const double saved = net.parameters()[i];
        net.parameters()[i] = saved + h;
        const double up = net.loss(batch, targets, 1.0);
        net.parameters()[i] = saved - h;
        const double down = net.loss(batch, targets, 1.0);
        net.parameters()[i] = saved;
        const double fd = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1e-6, std::abs(fd) + std::abs(grad[i])));
    }
    v.detail << " gradient max rel err " << worst;
    v.require(worst < 1e-4, "gradient relative error < 1e-4");

    bool mm_ok = true;
    for (int rep = 0; rep < 10000 && mm_ok; ++rep) {
        std::vector<double> x(static_cast<std::size_t>(uniform_int(rng, 1, 12)));
        for (auto& e : x) e = -10.0 + 20.0 * uniform01(rng);
        const double omega = 0.01 + 2.0 * uniform01(rng), c = -5.0 + 10.0 * uniform01(rng);
        const double mm = mellowmax(x, omega);
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
        const double mx = *std::max_element(x.begin(), x.end());
        auto shifted = x;
        for (auto& e : shifted) e += c;
        mm_ok = mm >= mean - 1e-9 && mm <= mx + 1e-9 && std::abs(mellowmax(shifted, omega) - mm - c) < 1e-9;
    }
    v.require(mm_ok, "mellowmax within [mean, max] and shift-equivariant");

    bool huber_ok = true;
    for (double delta : {0.5, 1.0, 2.0})
        for (double s : {-1.0, 1.0}) {
            const double e = s * delta, eps = 1e-11;
            huber_ok = huber_ok && std::abs(huber(e + eps, delta) - huber(e - eps, delta)) < 1e-9 &&
                       std::abs(huber_derivative(e + eps, delta) - huber_derivative(e - eps, delta)) < 1e-9;
        }
    v.require(huber_ok, "huber C1 at |e| = delta");

    const std::vector<double> q{0.4, -kInf, 1.3, 0.9, -kInf, -0.2};
    const auto p = behavior_distribution(q, 0.3, 1.0);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    std::vector<int> counts(q.size(), 0);
    for (int i = 0; i < 100000; ++i) ++counts[static_cast<std::size_t>(sample_action(q, 0.3, 1.0, rng))];
    v.detail << ", behavior sum " << total;
    v.require(std::abs(total - 1.0) <= 1e-9, "behavior distribution sums to 1");
    v.require(p[1] == 0.0 && p[4] == 0.0 && counts[1] == 0 && counts[4] == 0,
              "no mass on masked channels over 1e5 draws");
    report(3, "learning primitives", v);
}

// ---------------------------------------------------------------------------

void criterion_4() {
    Verdict v;
    const RewardParams rp;
    Rng rng = make_rng(0xacc4);
    bool bounded = true;
    for (int rep = 0; rep < 100000; ++rep) {
        std::vector<double> qv(10);
        const int m = uniform_int(rng, 1, 15);
        for (auto& x : qv) x = uniform_int(rng, 0, m) / static_cast<double>(m);
        const double r = personal_reward(qv, uniform_int(rng, 0, 9), uniform_int(rng, 0, 9), rp);
        bounded = bounded && r >= -0.8 * rp.c1 - 1e-12 && r <= 4.0 * rp.c1 + 1e-12;
    }
    v.require(bounded, "reward in [-0.8 c1, 4 c1]");

    // Three traces: a desired channel switched to, the same channel kept,
    // and the best and worst ranked of ten channels below zeta.
    std::vector<double> high(10, 0.5);
    high[3] = 0.95;
    const std::vector<double> ranks{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.05, 0.15};
    const double t1 = personal_reward(high, 3, 1, rp);
    const double t2 = personal_reward(high, 3, 3, rp);
    const double t3 = personal_reward(ranks, 8, 0, rp);
    const double t4 = personal_reward(ranks, 7, 0, rp);
    v.detail << " traces " << t1 << ", " << t2 << ", " << t4 << ", " << t3;
    v.require(t1 == 4.0, "switch to a desired channel gives r_desired");
    v.require(std::abs(t2 - 4.4) < 1e-15, "keeping a desired channel gives c1 r_desired");
    v.require(std::abs(t4 - 1.0) < 1e-15, "unique maximum below zeta gives 1");
    v.require(std::abs(t3 - (-0.8)) < 1e-15, "unique minimum of ten gives -0.8");

    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> x(static_cast<std::size_t>(uniform_int(rng, 1, 60)));
        for (auto& e : x) e = -0.88 + 5.28 * uniform01(rng);
        long double sum = 0.0L;
        for (double e : x) sum += e;
        worst = std::max(worst, std::abs(social_welfare_reward(x) - static_cast<double>(sum / x.size())));
    }
    v.detail << ", running mean max err " << worst;
    v.require(worst <= 1e-12, "running mean within 1e-12 of the arithmetic mean");
    report(4, "reward", v);
}

// ---------------------------------------------------------------------------

struct SeedRun {
    std::uint64_t seed = 0;
    TrainResult trained;
    double early = 0.0;
    double late = 0.0;
};

std::vector<SeedRun> train_seeds(const fs::path& root) {
    std::vector<SeedRun> runs;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto cfg = parse_config("{}", seed);
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream quiet;
        SeedRun run;
        run.seed = seed;
        run.trained = cmd_train(cfg, root / ("train_seed" + std::to_string(seed)), quiet);
        run.early = window_mean_reward(run.trained.log, 1, 100);
        run.late = window_mean_reward(run.trained.log, 900, 1000);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("  trained seed %llu in %.0f s: reward 1-100 %.3f, 900-1000 %.3f\n",
                    static_cast<unsigned long long>(seed), secs, run.early, run.late);
        std::fflush(stdout);
        runs.push_back(std::move(run));
    }
    return runs;
}

void criterion_5(const std::vector<SeedRun>& runs) {
    Verdict v;
    for (const auto& r : runs) {
        v.detail << " seed " << r.seed << ": " << r.early << " -> " << r.late << ";";
        v.require(r.late > r.early, "seed " + std::to_string(r.seed) + " improves");
    }
    report(5, "training improves reward on every seed (default config, 3 seeds)", v);
}

void criterion_6(const std::vector<SeedRun>& runs, const fs::path& root) {
    Verdict v;
    bool any = false;
    for (const auto& r : runs) {
        const auto cfg = parse_config("{\"seed\": 2024}");
        auto spec = cfg.grid();
        auto net = std::make_shared<const ValueNetwork>(r.trained.net);
        const auto carriers = spec.propagation.carrier_mhz;
        const double target = spec.sinr_target_db;
        PolicyParams greedy;
        greedy.greedy = true;
        const std::vector<NamedPolicy> policies{
            {"carlton", [net, greedy] { return std::make_unique<CarltonPolicy>(net, greedy); }, false},
            {"ra", [] { return std::make_unique<RandomAgentPolicy>(); }, false},
            {"jar", [carriers] { return std::make_unique<JarPolicy>(carriers); }, false},
            {"centralized", [target] { return std::make_unique<CentralizedPolicy>(target); }, true}};
        const auto report_ = evaluate_grid(policies, spec);
        write_grid_artifacts(root / ("eval_seed" + std::to_string(r.seed)), report_, spec);

        const auto c = aggregate(report_, "carlton");
        const auto ra = aggregate(report_, "ra");
        const auto jar = aggregate(report_, "jar");
        const double c_small = aggregate(report_, "carlton", 2, 5).cq_mean;
        const double opt_small = aggregate(report_, "centralized", 2, 5).cq_mean;
        const double gap = (opt_small - c_small) / opt_small;
        const bool pass = c.episodes == 420 && c.cq_combined >= 1.25 * ra.cq_combined &&
                          c.cq_combined >= 1.08 * jar.cq_combined && gap <= 0.06;
        std::printf("  seed %llu: carlton %.4f, ra %.4f (x%.3f), jar %.4f (x%.3f), N<=5 gap %.2f%%\n",
                    static_cast<unsigned long long>(r.seed), c.cq_combined, ra.cq_combined,
                    c.cq_combined / ra.cq_combined, jar.cq_combined, c.cq_combined / jar.cq_combined,
                    100.0 * gap);
        std::fflush(stdout);
        v.detail << " seed " << r.seed << (pass ? " ok;" : " short;");
        any = any || pass;
    }
    v.require(any, "best of 3 seeds meets all margins");
    report(6, "420-game grid vs RA, JAR and centralized", v);
}

// ---------------------------------------------------------------------------

void criterion_7(const fs::path& root) {
    Verdict v;
    const auto cfg = parse_config(R"({"seed": 31, "episodes": 20, "decision_points": 10,
        "eval_networks_max": 6, "games_per_n": 4})");
    EvalRequest req;
    req.phi = {std::nullopt, 0.05};
    std::ostringstream quiet;
    std::vector<fs::path> dirs;
    for (const char* run : {"a", "b"}) {
        const auto dir = root / "rerun" / run;
        fs::remove_all(dir);
        cmd_train(cfg, dir / "train", quiet);
        req.checkpoint = dir / "train" / "checkpoint.json";
        cmd_eval(cfg, req, dir / "eval", quiet);
        dirs.push_back(dir);
    }
    int compared = 0, identical = 0;
    for (const auto& e : fs::recursive_directory_iterator(dirs[0])) {
        if (e.path().extension() != ".csv") continue;
        const auto rel = fs::relative(e.path(), dirs[0]);
        ++compared;
        if (fs::exists(dirs[1] / rel) && slurp(e.path()) == slurp(dirs[1] / rel)) ++identical;
    }
    v.detail << " " << identical << "/" << compared << " CSV files byte-identical";
    v.require(compared >= 8 && identical == compared, "every CSV identical across reruns");
    report(7, "byte-identical CSV reruns", v);
}

} // namespace

int main(int argc, char** argv) {
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "carlton_acceptance";
    fs::create_directories(root);
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        const auto runs = train_seeds(root);
        criterion_5(runs);
        criterion_6(runs, root);
        criterion_7(root);
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
