#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "comomab/envs.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace comomab;

namespace {

std::vector<std::size_t> support_arms(const Action& a) {
    std::vector<std::size_t> arms;
    for (const auto& e : a.support()) arms.push_back(e.arm);
    return arms;
}

// Every sample of every action stays in the unit cube.
void fuzz_unit_cube(const Environment& env, std::size_t draws, std::uint64_t seed) {
    Rng rng(seed);
    const auto& acts = *env.action_set();
    bool ok = true;
    for (std::size_t k = 0; k < draws && ok; ++k) {
        const auto arms = support_arms(acts[k % acts.size()]);
        for (const RewardVector& x : env.sample(arms, rng)) ok = ok && x.dim() == env.dimension() && x.in_unit_cube();
    }
    CHECK(ok);
}

CommConfig small_comm(std::size_t m, std::size_t q, std::size_t h) {
    CommConfig c;
    c.users = m;
    c.channels = q;
    c.rates = h;
    c.snr = 1.0;
    c.lambda.assign(m * q, 0.1);
    for (std::size_t p = 0; p < m * q; ++p) {
        for (std::size_t k = 0; k < h; ++k) c.rate_schedule.push_back(0.2 * static_cast<double>(k + 1));
    }
    return c;
}

}  // namespace

TEST_CASE("lambert w") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(lambert_w(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    const double w = lambert_w(2.1);
    CHECK(std::abs(w * std::exp(w) - 2.1) <= 1e-12);
    CHECK(std::abs(w - oracle::lambert_bisect(2.1)) <= 1e-12);
    // Reference value from an arbitrary-precision evaluation.
    CHECK(w == doctest::Approx(0.875218758680547).epsilon(1e-14));
    for (double x : {1e-12, 1e-6, 0.05, 0.75, 3.0, 10.0, 1e3, 1e6}) {
        const double v = lambert_w(x);
        CHECK(std::abs(v * std::exp(v) - x) <= 1e-12 * std::max(1.0, x));
        CHECK(v >= 0.0);
    }
    CHECK_THROWS_AS(lambert_w(-0.1), std::domain_error);
}

TEST_CASE("outage probability") {
    CHECK(outage_probability(0.14, 0.0, 1.0) == 0.0);
    CHECK(outage_probability(1e-12, 1.0, 1.0) < 1e-11);

    const double rate = lambert_w(2.1);
    const double p = outage_probability(0.14, rate, 1.0);
    CHECK(p == doctest::Approx(1.0 - std::exp(-0.14 * (std::exp(rate) - 1.0))).epsilon(1e-14));

    std::mt19937_64 gen(31);
    std::exponential_distribution<double> gain(0.14);
    const int n = 1000000;
    int outages = 0;
    for (int k = 0; k < n; ++k) outages += std::log(1.0 + gain(gen)) < rate ? 1 : 0;
    const double freq = static_cast<double>(outages) / n;
    CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("comm action counts") {
    const CommEnvironment six(paper6_comm_config());
    CHECK(six.action_set()->size() == 108);
    CHECK(six.n_arms() == 24);
    CHECK(six.action_set()->max_support() == 2);
    CHECK(six.action_set()->max_weight() == 1.0);
    CHECK(six.dimension() == 2);

    CHECK(CommEnvironment(small_comm(1, 1, 1)).action_set()->size() == 1);
    CHECK(CommEnvironment(small_comm(2, 2, 2)).action_set()->size() == 8);
    for (std::size_t m = 1; m <= 3; ++m) {
        for (std::size_t q = m; q <= 4; ++q) {
            for (std::size_t h = 1; h <= 3; ++h) {
                const CommEnvironment env(small_comm(m, q, h));
                const auto expect = static_cast<std::size_t>(std::pow(h, m)) * oracle::factorial_ratio(q, m);
                CHECK(env.action_set()->size() == expect);
            }
        }
    }
    CHECK_THROWS_AS(CommEnvironment(small_comm(3, 2, 1)), ConfigurationError);
}

TEST_CASE("comm actions are one-to-one assignments") {
    const CommEnvironment env(paper6_comm_config());
    const auto& cfg = env.config();
    std::set<std::vector<std::size_t>> seen;
    for (const Action& a : env.action_set()->actions()) {
        const auto arms = support_arms(a);
        REQUIRE(arms.size() == cfg.users);
        std::set<std::size_t> users, channels;
        for (std::size_t arm : arms) {
            users.insert(arm / (cfg.channels * cfg.rates));
            channels.insert((arm / cfg.rates) % cfg.channels);
            CHECK(a.weight(arm) == 1.0);
        }
        CHECK(users.size() == cfg.users);
        CHECK(channels.size() == cfg.users);
        seen.insert(arms);
    }
    CHECK(seen.size() == 108);
}

TEST_CASE("comm means follow the closed forms") {
    const CommEnvironment env(paper6_comm_config());
    const auto& cfg = env.config();
    const auto means = env.true_means();
    for (std::size_t i = 0; i < cfg.users; ++i) {
        for (std::size_t j = 0; j < cfg.channels; ++j) {
            const double lam = cfg.lambda[i * cfg.channels + j];
            const double r_top = lambert_w(15.0 * lam);
            for (std::size_t k = 0; k < cfg.rates; ++k) {
                const double r = cfg.rate_schedule[(i * cfg.channels + j) * cfg.rates + k];
                CHECK(r == doctest::Approx(r_top * (k == 0 ? 0.25 : k == 1 ? 0.5 : 1.0)).epsilon(1e-14));
                const RewardVector& mu = means[env.arm_index(i, j, k)];
                CHECK(mu[0] == doctest::Approx(std::exp(-lam * std::expm1(r) / cfg.snr)).epsilon(1e-13));
                CHECK(mu[1] == r * mu[0] / r_top);
            }
        }
    }
}

TEST_CASE("comm sample means converge") {
    const CommEnvironment env(paper6_comm_config());
    const auto means = env.true_means();
    Rng rng(2);
    const std::size_t n = 100000;
    for (std::size_t arm = 0; arm < env.n_arms(); ++arm) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const RewardVector x = env.sample_arm(arm, rng);
            s0 += x[0];
            s1 += x[1];
        }
        const double tol = 4.0 * std::sqrt(1.0 / (4.0 * n));
        CHECK(std::abs(s0 / n - means[arm][0]) <= tol);
        CHECK(std::abs(s1 / n - means[arm][1]) <= tol);
    }

    // Tighter check on one arm: 10^6 draws, 3 standard errors per coordinate.
    const std::size_t arm = env.arm_index(0, 2, 1);
    const std::size_t big = 1000000;
    double s0 = 0.0, s1 = 0.0, q1 = 0.0;
    for (std::size_t k = 0; k < big; ++k) {
        const RewardVector x = env.sample_arm(arm, rng);
        s0 += x[0];
        s1 += x[1];
        q1 += x[1] * x[1];
    }
    const double p = means[arm][0];
    CHECK(std::abs(s0 / big - p) <= 3.0 * std::sqrt(p * (1.0 - p) / big));
    const double var1 = q1 / big - (s1 / big) * (s1 / big);
    CHECK(std::abs(s1 / big - means[arm][1]) <= 3.0 * std::sqrt(var1 / big));
}

TEST_CASE("comm sample edge cases") {
    CommConfig dead = small_comm(1, 1, 2);
    dead.lambda = {1e12};
    const CommEnvironment silent(dead);
    Rng rng(1);
    for (int k = 0; k < 1000; ++k) CHECK(silent.sample_arm(1, rng) == RewardVector{0.0, 0.0});

    const CommEnvironment env(paper6_comm_config());
    for (int k = 0; k < 2000; ++k) {
        const RewardVector x = env.sample_arm(env.arm_index(1, 3, 2), rng);
        CHECK(x[1] == x[0]);
    }
}

TEST_CASE("cosine diversity") {
    const std::vector<unsigned char> all{1, 1, 1, 1, 1, 1};
    CHECK(cosine_diversity(all, 3, 2) == 0.0);
    const std::vector<unsigned char> disjoint{1, 0, 0, 1};
    CHECK(cosine_diversity(disjoint, 2, 2) == 1.0);
    const std::vector<unsigned char> empty{0, 0, 1, 1};
    CHECK(cosine_diversity(empty, 2, 2) == 1.0);
    const std::vector<unsigned char> half{1, 1, 1, 0};
    CHECK(cosine_diversity(half, 2, 2) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
}

TEST_CASE("recommender slates") {
    RecConfig cfg{6, 3, 4, {0.5, 0.5}, std::vector<double>(12, 0.5), DiversityMode::cosine};
    const RecEnvironment env(cfg);
    CHECK(env.action_set()->size() == 20);
    CHECK(env.action_set()->max_support() == 3);
    CHECK(env.action_set()->max_weight() == 1.0);
    CHECK_THROWS_AS(env.true_means(), std::logic_error);
    cfg.slate_size = 7;
    CHECK_THROWS_AS(RecEnvironment{cfg}, ConfigurationError);
    cfg.slate_size = 2;
    cfg.type_probs = {0.5, 0.4};
    CHECK_THROWS_AS(RecEnvironment{cfg}, ConfigurationError);
}

TEST_CASE("recommender rewards") {
    Rng rng(6);
    const RecEnvironment loved({3, 2, 5, {1.0}, {1.0, 1.0, 1.0}, DiversityMode::cosine});
    const std::vector<std::size_t> slate{0, 2};
    for (int k = 0; k < 100; ++k) {
        for (const RewardVector& x : loved.sample(slate, rng)) CHECK(x == RewardVector{1.0, 0.0});
    }

    const RecEnvironment coin({4, 2, 3, {1.0}, {0.5, 0.5, 0.5, 0.5}, DiversityMode::cosine});
    const int n = 100000;
    double liked = 0.0, diversity = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto xs = coin.sample(slate, rng);
        liked += xs[0][0];
        diversity += xs[0][1];
        CHECK(xs[0][1] == xs[1][1]);
    }
    // X^1 averages three Bernoulli(1/2) draws: variance 1/12.
    CHECK(std::abs(liked / n - 0.5) <= 3.0 * std::sqrt(1.0 / 12.0 / n));
    const double expect = coin.expected_cosine_diversity(slate);
    CHECK(std::abs(diversity / n - expect) <= 4.0 * std::sqrt(0.25 / n));
    const auto action_means = coin.true_action_means();
    CHECK(action_means[0][0] == doctest::Approx(1.0));
    CHECK(action_means[0][1] == doctest::Approx(2.0 * expect));
}

TEST_CASE("recommender variance mode") {
    const RecConfig cfg{4, 2, 5, {0.3, 0.7}, {0.9, 0.2, 0.5, 0.1, 0.1, 0.6, 0.5, 0.8}, DiversityMode::variance};
    const RecEnvironment env(cfg);
    const auto means = env.true_means();
    Rng rng(12);
    const std::vector<std::size_t> all{0, 1, 2, 3};
    const std::size_t n = 100000;
    std::vector<double> s0(4, 0.0), s1(4, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto xs = env.sample(all, rng);
        for (std::size_t i = 0; i < 4; ++i) {
            s0[i] += xs[i][0];
            s1[i] += xs[i][1];
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const double rho = 0.3 * cfg.like_probs[i] + 0.7 * cfg.like_probs[4 + i];
        CHECK(means[i][0] == doctest::Approx(rho));
        const double tol = 4.0 * std::sqrt(1.0 / (4.0 * n));
        CHECK(std::abs(s0[i] / n - means[i][0]) <= tol);
        CHECK(std::abs(s1[i] / n - means[i][1]) <= tol);
    }
}

TEST_CASE("routing path enumeration") {
    const auto parallel = parse_edge_list("s d 1 1 1 0.5 0.5\ns d 2 2 1 1 1\n");
    const RoutingEnvironment two({parallel, "s", "d", 0});
    CHECK(two.action_set()->size() == 2);
    CHECK(two.action_set()->max_support() == 1);

    const auto diamond = parse_edge_list("s a 1 1 1 0 0\ns b 1 1 1 0 0\na d 1 1 1 0 0\nb d 1 1 1 0 0\n");
    const RoutingEnvironment dia({diamond, "s", "d", 0});
    CHECK(dia.action_set()->size() == 2);
    CHECK(dia.action_set()->max_support() == 2);
    CHECK(dia.action_set()->max_weight() == 1.0);
    // Zero cost gives full reward on both coordinates.
    for (const RewardVector& mu : dia.true_action_means()) CHECK(mu == RewardVector{2.0, 2.0});

    CHECK_THROWS_AS(RoutingEnvironment({diamond, "d", "s", 0}), ConfigurationError);
    CHECK_THROWS_AS(RoutingEnvironment({diamond, "s", "x", 0}), ConfigurationError);
}

TEST_CASE("routing path counts match a dynamic program on random DAGs") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int built = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 6;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        std::ostringstream text;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (u(gen) < 0.45) {
                    edges.emplace_back(a, b);
                    text << 'n' << a << " n" << b << " 1 1 1 0.5 0.5\n";
                }
            }
        }
        const std::uint64_t count = oracle::dag_path_count(n, edges, 0, n - 1);
        std::set<std::size_t> nodes;
        for (const auto& [a, b] : edges) {
            nodes.insert(a);
            nodes.insert(b);
        }
        if (count == 0) {
            if (nodes.contains(0) && nodes.contains(n - 1)) {
                CHECK_THROWS_AS(RoutingEnvironment({parse_edge_list(text.str()), "n0", "n" + std::to_string(n - 1), 0}),
                                ConfigurationError);
            }
            continue;
        }
        const RoutingEnvironment env({parse_edge_list(text.str()), "n0", "n" + std::to_string(n - 1), 0});
        CHECK(env.action_set()->size() == count);
        ++built;
    }
    CHECK(built > 50);
}

TEST_CASE("routing path length cap") {
    const auto edges = parse_edge_list("s a 1 1 1 0 0\na d 1 1 1 0 0\ns d 1 1 1 0 0\n");
    CHECK(RoutingEnvironment({edges, "s", "d", 0}).action_set()->size() == 2);
    const RoutingEnvironment capped({edges, "s", "d", 1});
    CHECK(capped.action_set()->size() == 1);
    CHECK(capped.n_arms() == 1);
}

TEST_CASE("routing sample means") {
    const auto edges = parse_edge_list("s a 10 5  0.5 2 1  0.5 6 3\na d 10 5  0.7 1 4  0.3 9 1\n");
    const RoutingEnvironment env({edges, "s", "d", 0});
    const auto means = env.true_means();
    CHECK(means[0][0] == doctest::Approx(0.6));
    CHECK(means[0][1] == doctest::Approx(0.6));
    CHECK(means[1][0] == doctest::Approx(0.66));
    CHECK(means[1][1] == doctest::Approx(0.38));
    Rng rng(3);
    const std::vector<std::size_t> arms{0, 1};
    const std::size_t n = 100000;
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += env.sample(arms, rng)[1][1];
    CHECK(std::abs(s / n - 0.38) <= 4.0 * std::sqrt(1.0 / (4.0 * n)));
}

TEST_CASE("edge list errors name the line") {
    auto message = [](std::string_view text) {
        try {
            parse_edge_list(text);
        } catch (const ConfigurationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("# header\ns a 1 1 1 0 0\ns b 1 1\n").find("line 3") != std::string::npos);
    CHECK(message("s a 1 1 x 0 0\n").find("line 1") != std::string::npos);
    CHECK(message("s a 1 1 0.5 0 0\n").find("sum to 1") != std::string::npos);
    CHECK(message("s a 1 1 1 2 0\n").find("delay") != std::string::npos);
    CHECK(message("s s 1 1 1 0 0\n").find("self-loop") != std::string::npos);
    CHECK(message("s a 1 1 1 0 0 # fine\n\n") == "no error");
    CHECK_THROWS_AS(load_edge_list("/nonexistent/graph.edges"), ConfigurationError);
}

TEST_CASE("bernoulli environment") {
    const BernoulliEnvironment env({{0.2, 0.9}, {0.6, 0.4}}, {Action::unit(2, {0}), Action::unit(2, {0, 1})});
    CHECK(env.true_action_means()[1][0] == doctest::Approx(0.8));
    CHECK_THROWS_AS(BernoulliEnvironment({{1.2}}, {Action::unit(1, {0})}), ConfigurationError);
    fuzz_unit_cube(env, 100000, 8);
}

TEST_CASE("samples stay in the unit cube") {
    fuzz_unit_cube(CommEnvironment(paper6_comm_config()), 100000, 1);
    fuzz_unit_cube(RecEnvironment({5, 2, 4, {0.5, 0.5}, {0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.8, 0.5, 0.6, 0.4},
                                   DiversityMode::cosine}),
                   100000, 2);
    fuzz_unit_cube(RecEnvironment({5, 2, 4, {1.0}, {0.9, 0.1, 0.5, 0.3, 0.7}, DiversityMode::variance}), 100000, 3);
    const auto edges = parse_edge_list("s a 10 5  0.5 2 1  0.5 6 3\ns b 10 5 1 4 2\na d 10 5 0.7 1 4 0.3 9 1\n"
                                       "b d 10 5 0.2 3 3 0.8 5 1\na b 10 5 1 10 5\n");
    fuzz_unit_cube(RoutingEnvironment({edges, "s", "d", 0}), 100000, 4);
}
