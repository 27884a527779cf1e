#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "comomab/core.hpp"
#include "comomab/random.hpp"

namespace comomab {

/// A stochastic reward process over a fixed action set. Samples lie in
/// [0,1]^D and are independent across calls. Instances are immutable after
/// construction; all randomness comes from the caller's generator.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string_view kind() const noexcept = 0;

    const std::shared_ptr<const ActionSet>& action_set() const noexcept { return actions_; }
    std::size_t dimension() const noexcept { return actions_->dimension(); }
    std::size_t n_arms() const noexcept { return actions_->n_arms(); }

    /// Per-arm mean vectors. Oracle access for regret accounting only.
    virtual std::vector<RewardVector> true_means() const = 0;
    /// Per-action mean vectors; by default sum_i a_i mu_i.
    virtual std::vector<RewardVector> true_action_means() const;

    /// One joint draw for the listed arms (ascending, the support of a valid
    /// action). Returns one reward vector per listed arm, same order.
    virtual std::vector<RewardVector> sample(std::span<const std::size_t> arms, Rng& rng) const = 0;

protected:
    std::shared_ptr<const ActionSet> actions_;
};

// ------------------------------------------------------------ helpers

/// Principal branch of the Lambert W function for x >= 0 (std::domain_error
/// for x < 0). Halley iteration started from log(1 + x).
double lambert_w(double x);

/// Pr(log(1 + g * snr) < rate) for g ~ Exponential(lambda), natural log.
double outage_probability(double lambda, double rate, double snr);

// ---------------------------------------------------- multi-user comm

struct CommConfig {
    std::size_t users = 0;     // M
    std::size_t channels = 0;  // Q
    std::size_t rates = 0;     // H
    std::vector<double> lambda;  // M x Q, row-major, exponential rate of the channel gain
    double snr = 1.0;
    std::vector<double> rate_schedule;  // M x Q x H, row-major, strictly increasing in the last index
};

/// R/4, R/2, R with R = W(15 lambda) for every user/channel pair (H = 3).
std::vector<double> paper6_rate_schedule(std::span<const double> lambda);

/// M = 2, Q = 4, H = 3, SNR = 1 with the published gain-parameter matrix.
CommConfig paper6_comm_config();

/// Users are matched one-to-one to channels and each picks a rate. Arm
/// (user, channel, rate) has index (user * Q + channel) * H + rate. Actions
/// are ordered by the injective channel assignment, then by rate indices,
/// both lexicographically.
class CommEnvironment final : public Environment {
public:
    explicit CommEnvironment(CommConfig cfg);

    std::string_view kind() const noexcept override { return "comm"; }
    std::vector<RewardVector> true_means() const override;
    std::vector<RewardVector> sample(std::span<const std::size_t> arms, Rng& rng) const override;

    const CommConfig& config() const noexcept { return cfg_; }
    std::size_t arm_index(std::size_t user, std::size_t channel, std::size_t rate) const noexcept {
        return (user * cfg_.channels + channel) * cfg_.rates + rate;
    }
    /// (success, success * R_k / R_H) from a single channel-gain draw.
    RewardVector sample_arm(std::size_t arm, Rng& rng) const;

private:
    CommConfig cfg_;
};

// -------------------------------------------------------- recommender

enum class DiversityMode { cosine, variance };

struct RecConfig {
    std::size_t items = 0;        // N
    std::size_t slate_size = 0;   // K
    std::size_t users = 0;        // M users per step
    std::vector<double> type_probs;  // hidden user types
    std::vector<double> like_probs;  // types x items, row-major
    DiversityMode diversity = DiversityMode::cosine;
};

/// Slates of K out of N items. Objective 1 is the fraction of users liking
/// the item. Objective 2 is either the slate-level cosine diversity of the
/// users' like vectors (same value for every item of the slate) or the
/// rescaled rating variance of the item.
class RecEnvironment final : public Environment {
public:
    explicit RecEnvironment(RecConfig cfg);

    std::string_view kind() const noexcept override { return "recommender"; }
    // Only defined in variance mode: cosine diversity depends on the whole
    // slate, so there is no per-item mean (throws std::logic_error).
    std::vector<RewardVector> true_means() const override;
    std::vector<RewardVector> true_action_means() const override;
    std::vector<RewardVector> sample(std::span<const std::size_t> arms, Rng& rng) const override;

    const RecConfig& config() const noexcept { return cfg_; }
    /// Marginal like probability of each item.
    std::vector<double> like_marginals() const;
    /// Exact expected cosine diversity of a slate.
    double expected_cosine_diversity(std::span<const std::size_t> slate) const;

private:
    RecConfig cfg_;
};

/// Mean pairwise cosine dissimilarity of like vectors, 1 for any zero vector.
/// `likes` holds one row of `width` 0/1 entries per user.
double cosine_diversity(std::span<const unsigned char> likes, std::size_t users, std::size_t width);

// ------------------------------------------------------------ routing

struct EdgeOutcome {
    double prob = 0.0;
    double delay = 0.0;
    double energy = 0.0;
};

struct RoutingEdge {
    std::string src;
    std::string dst;
    double delay_max = 1.0;
    double energy_max = 1.0;
    std::vector<EdgeOutcome> outcomes;  // finite joint law of (delay, energy)
};

struct RoutingConfig {
    std::vector<RoutingEdge> edges;
    std::string source;
    std::string destination;
    std::size_t max_path_len = 0;  // 0 means "number of nodes"
};

/// Parses the edge-list format, one edge per line:
///   src dst delay_max energy_max p_1 delay_1 energy_1 [p_2 delay_2 energy_2 ...]
/// Blank lines and '#' comments are skipped. Throws ConfigurationError with the
/// line number on malformed input.
std::vector<RoutingEdge> parse_edge_list(std::string_view text);
std::vector<RoutingEdge> load_edge_list(const std::filesystem::path& path);

/// Arms are the edges lying on at least one enumerated path (file order);
/// actions are the simple source-to-destination paths found by a depth-first
/// search that follows out-edges in file order.
class RoutingEnvironment final : public Environment {
public:
    explicit RoutingEnvironment(RoutingConfig cfg);

    std::string_view kind() const noexcept override { return "routing"; }
    std::vector<RewardVector> true_means() const override;
    std::vector<RewardVector> sample(std::span<const std::size_t> arms, Rng& rng) const override;

    const RoutingConfig& config() const noexcept { return cfg_; }
    // Edge (index into config().edges) behind each arm.
    std::span<const std::size_t> arm_edges() const noexcept { return arm_edges_; }

private:
    RoutingConfig cfg_;
    std::vector<std::size_t> arm_edges_;
};

// ---------------------------------------------------- generic testbed

/// Explicit arms whose coordinates are independent Bernoulli draws with the
/// given means, over an explicit action set.
class BernoulliEnvironment final : public Environment {
public:
    BernoulliEnvironment(std::vector<RewardVector> arm_means, std::vector<Action> actions);

    std::string_view kind() const noexcept override { return "bernoulli"; }
    std::vector<RewardVector> true_means() const override { return means_; }
    std::vector<RewardVector> sample(std::span<const std::size_t> arms, Rng& rng) const override;

private:
    std::vector<RewardVector> means_;
};

}  // namespace comomab
