#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "carlton/agent.hpp"
#include "carlton/errors.hpp"
#include "carlton/replay.hpp"

using namespace carlton;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("masking") {
    const std::vector<double> q{1.0, 2.0, 3.0};
    const auto m = mask_q(q, std::vector<double>{0.5, 0.0, 1.0});
    REQUIRE(m);
    CHECK((*m)[0] == 1.0);
    CHECK((*m)[1] == -kInf);
    CHECK((*m)[2] == 3.0);
    CHECK_FALSE(mask_q(q, std::vector<double>{0.0, 0.0, 0.0}));
}

TEST_CASE("behavior distribution values") {
    const auto p = behavior_distribution(std::vector<double>{std::log(2.0), 0.0}, 0.0, 1.0);
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // Uniform mixing only spreads over unmasked channels.
    const auto u = behavior_distribution(std::vector<double>{5.0, -kInf, 5.0, -kInf}, 1.0, 1.0);
    CHECK(u == std::vector<double>{0.5, 0.0, 0.5, 0.0});
}

TEST_CASE("behavior distributions sum to one with no mass on masked channels") {
    Rng rng = make_rng(61);
    for (int rep = 0; rep < 2000; ++rep) {
        const int k = uniform_int(rng, 1, 12);
        std::vector<double> q(static_cast<std::size_t>(k));
        for (auto& x : q) x = -20.0 + 40.0 * uniform01(rng);
        int masked = 0;
        for (auto& x : q)
            if (uniform01(rng) < 0.3 && masked < k - 1) {
                x = -kInf;
                ++masked;
            }
        const double alpha = uniform01(rng), beta = 0.1 + 5.0 * uniform01(rng);
        const auto p = behavior_distribution(q, alpha, beta);
        REQUIRE(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-9);
        for (int i = 0; i < k; ++i)
            if (q[static_cast<std::size_t>(i)] == -kInf) REQUIRE(p[static_cast<std::size_t>(i)] == 0.0);
    }
}

TEST_CASE("sampling never picks a masked channel and follows the distribution") {
    const std::vector<double> q{0.3, -kInf, 1.2, -kInf, 0.0};
    const auto p = behavior_distribution(q, 0.2, 1.0);
    Rng rng = make_rng(62);
    std::vector<int> counts(5, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sample_action(q, 0.2, 1.0, rng))];
    CHECK(counts[1] == 0);
    CHECK(counts[3] == 0);
    for (int c : {0, 2, 4}) {
        const double expect = draws * p[static_cast<std::size_t>(c)];
        CHECK(std::abs(counts[static_cast<std::size_t>(c)] - expect) < 5.0 * std::sqrt(expect));
    }
}

TEST_CASE("greedy picks the lowest index among ties and skips masked entries") {
    CHECK(greedy_action(std::vector<double>{1.0, 3.0, 3.0}) == 1);
    CHECK(greedy_action(std::vector<double>{-kInf, -1.0, -2.0}) == 1);
}

TEST_CASE("exploration schedule") {
    CHECK(epsilon_schedule(1, 1000) == 0.5);
    CHECK(epsilon_schedule(500, 1000) == doctest::Approx(0.01));
    CHECK(epsilon_schedule(800, 1000) == 0.01);
    CHECK(epsilon_schedule(250, 1000) == doctest::Approx(0.5 - 0.49 * 249.0 / 499.0));
    double prev = 1.0;
    for (int i = 1; i <= 1000; ++i) {
        const double e = epsilon_schedule(i, 1000);
        CHECK(e <= prev);
        prev = e;
    }
    CHECK_THROWS_AS(epsilon_schedule(0, 1000), DomainError);
}

TEST_CASE("switch post-processing uses a relative margin") {
    CHECK(post_process(0.5, 0.6, std::nullopt) == SwitchDecision::Switch);
    CHECK(post_process(0.5, 0.6, 0.1) == SwitchDecision::Switch);    // 0.1 > 0.05
    CHECK(post_process(0.5, 0.54, 0.1) == SwitchDecision::Keep);
    CHECK(post_process(1.0, 1.0, 0.05) == SwitchDecision::Keep);
    CHECK(post_process(0.0, 0.1, 0.5) == SwitchDecision::Switch);
}

TEST_CASE("select_action holds when every channel is unusable") {
    ValueNetwork net(MlpShape{4, 8, 0.2});
    Rng rng = make_rng(63);
    net.initialize(rng);
    const std::vector<double> qv(4, 0.0);
    std::vector<double> state{0, 0, 1, 0, 0, 0, 0, 0};
    PolicyParams p;
    p.epsilon_b = 1.0;
    for (int i = 0; i < 50; ++i) CHECK(select_action(state, qv, p, net, rng, 2) == 2);
}

TEST_CASE("select_action with masking only lands on usable channels") {
    ValueNetwork net(MlpShape{4, 8, 0.2});
    Rng rng = make_rng(64);
    net.initialize(rng);
    const std::vector<double> qv{0.0, 0.5, 0.0, 0.25};
    std::vector<double> state{1, 0, 0, 0, 0.0, 0.5, 0.0, 0.25};
    PolicyParams p;
    p.epsilon_b = 0.7;
    for (int i = 0; i < 500; ++i) {
        const int a = select_action(state, qv, p, net, rng, 0);
        CHECK((a == 1 || a == 3));
    }
}

TEST_CASE("phi keeps the current channel on marginal gains") {
    ValueNetwork net(MlpShape{2, 8, 0.2});
    Rng rng = make_rng(65);
    net.initialize(rng);
    const std::vector<double> qv{0.5, 0.52};
    std::vector<double> state{1, 0, 0.5, 0.52};
    PolicyParams p;
    p.greedy = true;
    p.phi = 0.1;
    CHECK(select_action(state, qv, p, net, rng, 0) == 0);
}

TEST_CASE("carlton policy naming and shape checks") {
    auto net = std::make_shared<const ValueNetwork>(MlpShape{3, 8, 0.2});
    PolicyParams p;
    p.greedy = true;
    CHECK(CarltonPolicy(net, p).name() == "carlton");
    p.phi = 0.05;
    CHECK(CarltonPolicy(net, p).name() == "carlton+phi=0.05");
    CarltonPolicy pol(net, p);
    const std::vector<double> qv(5, 0.5);
    CHECK_THROWS_AS(pol.decide(TurnContext{0, 0, 0, 0, qv}), DomainError);
}

TEST_CASE("replay memory is a FIFO with eviction") {
    ReplayMemory m(3);
    for (int i = 0; i < 5; ++i) m.push({{double(i)}, i, double(i), {double(i)}});
    CHECK(m.size() == 3);
    CHECK(m.at(0).action == 2);
    CHECK(m.at(2).action == 4);
    CHECK_THROWS_AS(m.at(3), DomainError);
    m.clear();
    CHECK(m.empty());
    CHECK_THROWS_AS(ReplayMemory(0), DomainError);
}

TEST_CASE("replay sampling is uniform (chi-squared)") {
    const int slots = 50;
    ReplayMemory m(slots);
    for (int i = 0; i < slots + 17; ++i) m.push({{0.0, 1.0}, i, 0.0, {1.0, 0.0}});
    Rng rng = make_rng(66);
    std::vector<int> counts(slots, 0);
    const int draws = 100000;
    for (auto i : m.sample_indices(draws, rng)) ++counts[i];
    const double expect = static_cast<double>(draws) / slots;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
    // 49 degrees of freedom, 0.1 % upper tail ~ 85.4.
    CHECK(chi2 < 85.4);

    const auto batch = m.sample(32, rng);
    CHECK(batch.size == 32);
    CHECK(batch.states.size() == 64);
}
