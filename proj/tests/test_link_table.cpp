#include <doctest.h>

#include <cmath>

#include "carlton/errors.hpp"
#include "carlton/link_table.hpp"
#include "carlton/observation.hpp"

using namespace carlton;

namespace {

std::vector<int> random_assignment(int n, int k, Rng& rng) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (auto& c : a) c = uniform_int(rng, 0, k - 1);
    return a;
}

// Packed world so that interference actually matters.
GenerationParams dense() {
    GenerationParams g;
    g.u1_m = 50;
    g.x1_m = 50;
    g.x2_m = 250;
    g.users_max = 8;
    return g;
}

} // namespace

TEST_CASE("cached user SINR matches the link-by-link oracle") {
    const auto p = PropagationParams::defaults();
    Rng rng = make_rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 5;
        const auto s = generate_scenario(n, dense(), rng);
        const LinkTable table(s, p);
        const auto a = random_assignment(n, p.channel_count(), rng);
        for (int i = 0; i < n; ++i)
            for (int u = 0; u < s.networks[static_cast<std::size_t>(i)].user_count(); ++u)
                for (int k = 0; k < p.channel_count(); k += 3) {
                    const double fast = table.user_sinr_db(a, i, u, k);
                    const double slow = user_average_sinr_db(s, p, a, i, u, k);
                    CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
                }
    }
}

TEST_CASE("user-average SINR is a linear-domain mean") {
    // Links at 0 dB and 10 dB average to 5.5, i.e. 7.40 dB rather than 5 dB.
    const double avg = linear_to_db(0.5 * (db_to_linear(0.0) + db_to_linear(10.0)));
    CHECK(std::abs(avg - 7.40) < 0.005);

    const auto p = PropagationParams::defaults();
    const auto s = generate_scenario(3, dense(), std::uint64_t{5});
    const std::vector<int> a{0, 1, 2};
    const auto& net = s.networks[0];
    for (int u = 0; u < net.user_count(); ++u) {
        double sum = 0.0;
        for (int t = 0; t < net.user_count(); ++t) {
            if (t == u) continue;
            sum += db_to_linear(pair_sinr(s, p, a, {0, t}, {0, u}, 4).sinr_db);
        }
        CHECK(user_average_sinr_db(s, p, a, 0, u, 4) ==
              doctest::Approx(linear_to_db(sum / (net.user_count() - 1))).epsilon(1e-12));
    }
}

TEST_CASE("quality vectors: table route equals reference, serial equals parallel") {
    const auto p = PropagationParams::defaults();
    Rng rng = make_rng(32);
    int mismatches = 0, cells = 0;
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + rep % 6;
        const auto s = generate_scenario(n, dense(), rng);
        const LinkTable table(s, p);
        const auto a = random_assignment(n, p.channel_count(), rng);
        const auto serial = all_quality_vectors(table, a, 4.0, Exec::Serial);
        const auto parallel = all_quality_vectors(table, a, 4.0, Exec::Parallel);
        CHECK(serial == parallel);
        for (int i = 0; i < n; ++i) {
            CHECK(quality_vector(table, a, i, 4.0) == serial[static_cast<std::size_t>(i)]);
            const auto ref = quality_vector_reference(s, p, a, i, 4.0);
            for (int k = 0; k < p.channel_count(); ++k) {
                ++cells;
                if (ref[static_cast<std::size_t>(k)] != serial[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])
                    ++mismatches;
                CHECK(channel_quality(table, a, i, k, 4.0) == serial[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
            }
        }
    }
    // The two routes round differently; a user landing within 1e-12 dB of
    // the target could flip, which should essentially never happen.
    CHECK(mismatches == 0);
    CHECK(cells > 0);
}

TEST_CASE("quality lies in [0, 1] in steps of 1/M") {
    const auto p = PropagationParams::defaults();
    Rng rng = make_rng(33);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 1 + rep % 7;
        const auto s = generate_scenario(n, dense(), rng);
        const LinkTable table(s, p);
        const auto a = random_assignment(n, p.channel_count(), rng);
        for (int i = 0; i < n; ++i) {
            const int m = table.user_count(i);
            for (double q : quality_vector(table, a, i, 4.0)) {
                CHECK(q >= 0.0);
                CHECK(q <= 1.0);
                CHECK(std::abs(q * m - std::round(q * m)) < 1e-12);
            }
        }
    }
}

TEST_CASE("more interferers never raise quality") {
    const auto p = PropagationParams::defaults();
    const auto s = generate_scenario(4, dense(), std::uint64_t{77});
    const LinkTable table(s, p);
    // Move network 3 onto network 0's channel: network 0 can only lose.
    const std::vector<int> apart{0, 3, 6, 9};
    const std::vector<int> crowded{0, 3, 6, 0};
    const auto q_apart = quality_vector(table, apart, 0, 4.0);
    const auto q_crowded = quality_vector(table, crowded, 0, 4.0);
    CHECK(q_crowded[0] <= q_apart[0]);
}

TEST_CASE("observation: BSINR threshold is strict and QV is the column mean") {
    const auto p = PropagationParams::defaults();
    const auto s = generate_scenario(3, dense(), std::uint64_t{9});
    const LinkTable table(s, p);
    const std::vector<int> a{2, 2, 5};
    const auto obs = observe(table, a, 1, 4.0);
    const int m = table.user_count(1);
    REQUIRE(obs.sinr_db.rows == m);
    REQUIRE(obs.sinr_db.cols == 10);
    for (int k = 0; k < 10; ++k) {
        double col = 0.0;
        for (int u = 0; u < m; ++u) {
            CHECK(obs.bsinr(u, k) == (obs.sinr_db(u, k) > 4.0 ? 1.0 : 0.0));
            col += obs.bsinr(u, k);
        }
        CHECK(obs.quality[static_cast<std::size_t>(k)] == doctest::Approx(col / m).epsilon(1e-15));
    }
    // With the target set to a user's exact SINR that user does not count.
    const double exact = obs.sinr_db(0, 0);
    const auto at = observe(table, a, 1, exact);
    CHECK(at.bsinr(0, 0) == 0.0);
}

TEST_CASE("agent state is one-hot channel followed by the QV") {
    const std::vector<double> qv{0.1, 0.2, 0.3, 0.4};
    const auto st = build_state(2, qv);
    CHECK(st.values == std::vector<double>{0, 0, 1, 0, 0.1, 0.2, 0.3, 0.4});
    CHECK(st.channel_count() == 4);
    CHECK(st.cbr()[2] == 1.0);
    CHECK(st.qv()[3] == 0.4);
    CHECK_THROWS_AS(build_state(4, qv), DomainError);
}

TEST_CASE("single-user networks are rejected") {
    Scenario s;
    s.centers = {{0, 0}};
    Network net;
    net.users = {{0, 0}};
    s.networks = {net};
    CHECK_THROWS_AS(LinkTable(s, PropagationParams::defaults()), DomainError);
}
