#include <random>

#include "comomab/core.hpp"
#include "doctest.h"

using namespace comomab;

TEST_CASE("weak dominance") {
    CHECK(weakly_dominates(RewardVector{2, 2}, RewardVector{1, 1}));
    CHECK_FALSE(weakly_dominates(RewardVector{2, 1}, RewardVector{1, 2}));
    CHECK(weakly_dominates(RewardVector{1, 1}, RewardVector{1, 1}));
}

TEST_CASE("dominance") {
    CHECK(dominates(RewardVector{2, 1}, RewardVector{1, 1}));
    CHECK_FALSE(dominates(RewardVector{1, 1}, RewardVector{1, 1}));
    CHECK_FALSE(dominates(RewardVector{1, 2}, RewardVector{2, 1}));
}

TEST_CASE("super dominance") {
    CHECK(super_dominates(RewardVector{2, 2}, RewardVector{1, 1}));
    CHECK_FALSE(super_dominates(RewardVector{2, 1}, RewardVector{1, 1}));
    CHECK_FALSE(super_dominates(RewardVector{1, 2}, RewardVector{2, 1}));
}

TEST_CASE("incomparability") {
    CHECK(incomparable(RewardVector{2, 1}, RewardVector{1, 2}));
    CHECK(incomparable(RewardVector{1, 1}, RewardVector{1, 1}));
    CHECK_FALSE(incomparable(RewardVector{1, 1}, RewardVector{2, 2}));
}

TEST_CASE("dimension mismatch is an error") {
    const RewardVector a{1, 2};
    const RewardVector b{1, 2, 3};
    CHECK_THROWS_AS(weakly_dominates(a, b), DimensionError);
    CHECK_THROWS_AS(dominates(a, b), DimensionError);
    CHECK_THROWS_AS(super_dominates(a, b), DimensionError);
    CHECK_THROWS_AS(incomparable(a, b), DimensionError);
}

TEST_CASE("dominance relations nest and behave as orders") {
    std::mt19937_64 gen(42);
    std::uniform_int_distribution<int> coord(0, 3);
    std::uniform_int_distribution<int> dim_pick(1, 4);
    auto draw = [&](std::size_t d) {
        RewardVector v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = coord(gen);
        return v;
    };
    for (int trial = 0; trial < 5000; ++trial) {
        const auto d = static_cast<std::size_t>(dim_pick(gen));
        const RewardVector u = draw(d), v = draw(d), w = draw(d);
        if (super_dominates(u, v)) CHECK(dominates(u, v));
        if (dominates(u, v)) CHECK(weakly_dominates(u, v));
        CHECK_FALSE(super_dominates(u, u));
        if (super_dominates(u, v) && super_dominates(v, w)) CHECK(super_dominates(u, w));
        CHECK(incomparable(u, v) == incomparable(v, u));
        CHECK(incomparable(u, u));
        if (d == 1) CHECK(super_dominates(u, v) == (v[0] < u[0]));
    }
}

TEST_CASE("action mean") {
    const std::vector<RewardVector> one{{0.3, 0.7}};
    CHECK(action_mean(Action::unit(1, {0}), one) == RewardVector{0.3, 0.7});

    const std::vector<RewardVector> two{{0.2, 0.1}, {0.3, 0.4}};
    const RewardVector sum = action_mean(Action::unit(2, {0, 1}), two);
    CHECK(sum[0] == doctest::Approx(0.5));
    CHECK(sum[1] == doctest::Approx(0.5));

    const std::vector<RewardVector> half{{0.5, 0.25}};
    CHECK(action_mean(Action::from_map(1, {{0, 2.0}}), half) == RewardVector{1.0, 0.5});

    CHECK_THROWS_AS(action_mean(Action::unit(3, {2}), two), DimensionError);
}

TEST_CASE("action mean is linear in the weights") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5;
        std::vector<RewardVector> means(n, RewardVector(3));
        for (auto& m : means) {
            for (std::size_t j = 0; j < 3; ++j) m[j] = u(gen);
        }
        std::map<std::size_t, double> wa, wb, wsum;
        for (std::size_t i = 0; i < n; ++i) {
            wa[i] = u(gen);
            wb[i] = u(gen);
            wsum[i] = wa[i] + wb[i];
        }
        const RewardVector lhs = action_mean(Action::from_map(n, wsum), means);
        const RewardVector rhs = action_mean(Action::from_map(n, wa), means) + action_mean(Action::from_map(n, wb), means);
        for (std::size_t j = 0; j < 3; ++j) CHECK(lhs[j] == doctest::Approx(rhs[j]).epsilon(1e-12));
    }
}

TEST_CASE("action construction invariants") {
    const Action a = Action::from_map(5, {{3, 1.5}, {1, 0.0}, {0, 2.0}});
    REQUIRE(a.support_size() == 2);
    CHECK(a.support()[0].arm == 0);
    CHECK(a.support()[1].arm == 3);
    CHECK(a.contains(3));
    CHECK_FALSE(a.contains(1));
    CHECK(a.weight(0) == 2.0);
    CHECK(a.dense() == std::vector<double>{2.0, 0.0, 0.0, 1.5, 0.0});

    CHECK_THROWS_AS(Action::from_map(3, {{0, -1.0}}), ConfigurationError);
    CHECK_THROWS_AS(Action::from_map(3, {{0, 0.0}}), ConfigurationError);
    CHECK_THROWS_AS(Action::unit(3, {5}), ConfigurationError);
    CHECK_THROWS_AS(Action::unit(3, {1, 1}), ConfigurationError);
}

TEST_CASE("action set constants and coverage") {
    std::vector<Action> actions{Action::from_map(3, {{0, 1.0}, {1, 3.0}}), Action::unit(3, {2})};
    const ActionSet set(3, 2, actions);
    CHECK(set.max_support() == 2);
    CHECK(set.max_weight() == 3.0);
    CHECK(set.actions_with_arm(1).size() == 1);

    std::vector<Action> uncovered{Action::unit(3, {0, 1})};
    CHECK_THROWS_AS(ActionSet(3, 2, uncovered), ConfigurationError);
    CHECK_THROWS_AS(ActionSet(4, 2, actions), ConfigurationError);
}
