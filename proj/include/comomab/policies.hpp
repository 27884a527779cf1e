#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "comomab/core.hpp"
#include "comomab/random.hpp"

namespace comomab {

// Raised when update() receives feedback that does not match the support of
// the played action.
class FeedbackError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One semi-bandit observation: the reward vector of a played arm.
struct ArmFeedback {
    std::size_t arm = 0;
    RewardVector reward;
};

/// Common contract for every learner. Steps are 1-based. A policy never sees
/// true means or gaps, only the action set and its own feedback.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string_view id() const noexcept = 0;
    virtual void reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) = 0;
    virtual std::size_t select(std::uint64_t t) = 0;
    // `feedback` must list exactly the support of action `chosen`, in
    // ascending arm order.
    virtual void update(std::uint64_t t, std::size_t chosen, std::span<const ArmFeedback> feedback) = 0;
};

/// Per-arm running means and play counters, stored row-major (arm, objective).
struct ArmStats {
    std::size_t dimension = 0;
    std::vector<double> mu_hat;
    std::vector<std::uint64_t> m;

    ArmStats() = default;
    ArmStats(std::size_t n_arms, std::size_t dim) : dimension(dim), mu_hat(n_arms * dim, 0.0), m(n_arms, 0) {}

    std::size_t n_arms() const noexcept { return m.size(); }
    std::span<const double> mean(std::size_t arm) const { return {mu_hat.data() + arm * dimension, dimension}; }
    void record(std::size_t arm, const RewardVector& x);
};

/// Per-action running means of the action reward sum_i a_i X_i and play counts.
struct ActionStats {
    std::size_t dimension = 0;
    std::vector<double> mu_hat;
    std::vector<std::uint64_t> n;

    ActionStats() = default;
    ActionStats(std::size_t n_actions, std::size_t dim) : dimension(dim), mu_hat(n_actions * dim, 0.0), n(n_actions, 0) {}

    std::span<const double> mean(std::size_t action) const { return {mu_hat.data() + action * dimension, dimension}; }
    void record(std::size_t action, std::span<const double> reward);
};

/// sqrt((L + 1) * max(0, log((t - 1) * D^{1/4})) / m). Requires m >= 1.
double como_confidence(std::uint64_t t, std::uint64_t m, std::size_t max_support, std::size_t dimension);

/// Combinatorial multi-objective UCB: initialization sweep over arms, then
/// uniform selection from the super Pareto front of the optimistic action
/// indices sum_i a_i (mu_hat_i + C_i(t)).
class ComoUcb final : public Policy {
public:
    std::string_view id() const noexcept override { return "como_ucb"; }
    void reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) override;
    std::size_t select(std::uint64_t t) override;
    void update(std::uint64_t t, std::size_t chosen, std::span<const ArmFeedback> feedback) override;

    const ArmStats& stats() const noexcept { return stats_; }
    // Test hook: overwrite the learned statistics.
    void set_stats(ArmStats stats);
    // Estimated front from the most recent main-loop select().
    std::span<const std::size_t> estimated_front() const noexcept { return front_; }
    // Main-loop step without the initialization branch; fills estimated_front().
    std::size_t select_from_front(std::uint64_t t);

private:
    std::shared_ptr<const ActionSet> actions_;
    ArmStats stats_;
    Rng rng_;
    std::vector<double> arm_index_;
    std::vector<double> action_index_;
    std::vector<std::size_t> front_;
};

struct ParetoUcb1Options {
    // Size of the Pareto front handed to the baseline.
    double k_star = 1.0;
    // Multiplier c in sqrt(c * log(t (D K*)^{1/4}) / n_a).
    double exploration = 2.0;
};

/// Multi-objective UCB1 that treats every action as an independent arm.
class ParetoUcb1 final : public Policy {
public:
    explicit ParetoUcb1(ParetoUcb1Options opts);
    std::string_view id() const noexcept override { return "pareto_ucb1"; }
    void reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) override;
    std::size_t select(std::uint64_t t) override;
    void update(std::uint64_t t, std::size_t chosen, std::span<const ArmFeedback> feedback) override;

    const ActionStats& stats() const noexcept { return stats_; }

private:
    ParetoUcb1Options opts_;
    std::shared_ptr<const ActionSet> actions_;
    ActionStats stats_;
    Rng rng_;
    std::vector<double> index_;
    std::vector<std::size_t> front_;
    std::vector<double> reward_;
};

/// Learning with linear rewards on objective 1 only; per-arm semi-bandit
/// statistics, argmax over actions with lowest-index tie-break.
class Llr final : public Policy {
public:
    std::string_view id() const noexcept override { return "llr"; }
    void reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) override;
    std::size_t select(std::uint64_t t) override;
    void update(std::uint64_t t, std::size_t chosen, std::span<const ArmFeedback> feedback) override;

    const ArmStats& stats() const noexcept { return stats_; }

private:
    std::shared_ptr<const ActionSet> actions_;
    ArmStats stats_;
    Rng rng_;
    std::vector<double> arm_index_;
};

/// Single-objective UCB1 over actions-as-arms, objective 1 only.
class SoUcb1 final : public Policy {
public:
    std::string_view id() const noexcept override { return "so_ucb1"; }
    void reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) override;
    std::size_t select(std::uint64_t t) override;
    void update(std::uint64_t t, std::size_t chosen, std::span<const ArmFeedback> feedback) override;

    const ActionStats& stats() const noexcept { return stats_; }

private:
    std::shared_ptr<const ActionSet> actions_;
    ActionStats stats_;
    std::vector<double> reward_;
};

/// A policy as named in an experiment config.
struct PolicyConfig {
    std::string id;
    std::optional<double> k_star;       // pareto_ucb1 only, required there
    std::optional<double> exploration;  // pareto_ucb1 only
};

inline constexpr std::string_view kPolicyIds[] = {"como_ucb", "pareto_ucb1", "llr", "so_ucb1"};

/// Throws ConfigurationError for unknown ids or invalid parameters.
std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg);

}  // namespace comomab
