#include "comomab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "comomab/pareto.hpp"

namespace comomab {

namespace {

void check_feedback(const ActionSet& actions, std::size_t chosen, std::span<const ArmFeedback> feedback) {
    if (chosen >= actions.size()) throw FeedbackError("update for unknown action " + std::to_string(chosen));
    const auto support = actions[chosen].support();
    if (feedback.size() != support.size()) {
        throw FeedbackError("action " + std::to_string(chosen) + " plays " + std::to_string(support.size()) +
                            " arms but feedback has " + std::to_string(feedback.size()));
    }
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (feedback[k].arm != support[k].arm) {
            throw FeedbackError("feedback for arm " + std::to_string(feedback[k].arm) + " where arm " +
                                std::to_string(support[k].arm) + " was played");
        }
        if (feedback[k].reward.dim() != actions.dimension()) {
            throw DimensionError("feedback reward has wrong dimension");
        }
    }
}

// sum_i a_i X_i for the played action, written into `out`.
void action_reward(const ActionSet& actions, std::size_t chosen, std::span<const ArmFeedback> feedback,
                   std::vector<double>& out) {
    out.assign(actions.dimension(), 0.0);
    const auto support = actions[chosen].support();
    for (std::size_t k = 0; k < support.size(); ++k) {
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += support[k].weight * feedback[k].reward[j];
    }
}

std::size_t initialization_action(const ActionSet& actions, std::uint64_t t, Rng& rng) {
    const auto candidates = actions.actions_with_arm(static_cast<std::size_t>(t - 1));
    return candidates[rng.uniform_index(candidates.size())];
}

void require_actions(const std::shared_ptr<const ActionSet>& actions) {
    if (!actions) throw std::logic_error("policy used before reset()");
}

}  // namespace

void ArmStats::record(std::size_t arm, const RewardVector& x) {
    double* mu = mu_hat.data() + arm * dimension;
    const double count = static_cast<double>(m[arm]);
    for (std::size_t j = 0; j < dimension; ++j) mu[j] = (mu[j] * count + x[j]) / (count + 1.0);
    ++m[arm];
}

void ActionStats::record(std::size_t action, std::span<const double> reward) {
    double* mu = mu_hat.data() + action * dimension;
    const double count = static_cast<double>(n[action]);
    for (std::size_t j = 0; j < dimension; ++j) mu[j] = (mu[j] * count + reward[j]) / (count + 1.0);
    ++n[action];
}

double como_confidence(std::uint64_t t, std::uint64_t m, std::size_t max_support, std::size_t dimension) {
    if (m == 0) throw std::logic_error("confidence radius of an unplayed arm");
    if (t < 2) throw std::domain_error("confidence radius needs t >= 2");
    const double log_term =
        std::log(static_cast<double>(t - 1)) + 0.25 * std::log(static_cast<double>(dimension));
    const double l = static_cast<double>(max_support);
    return std::sqrt((l + 1.0) * std::max(0.0, log_term) / static_cast<double>(m));
}

// ---------------------------------------------------------------- COMO-UCB

void ComoUcb::reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) {
    require_actions(actions);
    actions_ = std::move(actions);
    stats_ = ArmStats(actions_->n_arms(), actions_->dimension());
    rng_.seed(seed);
    arm_index_.assign(actions_->n_arms() * actions_->dimension(), 0.0);
    action_index_.assign(actions_->size() * actions_->dimension(), 0.0);
    front_.clear();
}

void ComoUcb::set_stats(ArmStats stats) {
    require_actions(actions_);
    if (stats.n_arms() != actions_->n_arms() || stats.dimension != actions_->dimension()) {
        throw DimensionError("arm statistics do not match the action set");
    }
    stats_ = std::move(stats);
}

std::size_t ComoUcb::select(std::uint64_t t) {
    require_actions(actions_);
    if (t == 0) throw std::domain_error("steps are 1-based");
    if (t <= actions_->n_arms()) return initialization_action(*actions_, t, rng_);
    return select_from_front(t);
}

std::size_t ComoUcb::select_from_front(std::uint64_t t) {
    require_actions(actions_);
    const std::size_t dim = actions_->dimension();
    const std::size_t n_arms = actions_->n_arms();
    for (std::size_t i = 0; i < n_arms; ++i) {
        const double radius = como_confidence(t, stats_.m[i], actions_->max_support(), dim);
        const auto mu = stats_.mean(i);
        for (std::size_t j = 0; j < dim; ++j) arm_index_[i * dim + j] = mu[j] + radius;
    }
    for (std::size_t k = 0; k < actions_->size(); ++k) {
        double* out = action_index_.data() + k * dim;
        std::fill(out, out + dim, 0.0);
        for (const Action::Entry& e : (*actions_)[k].support()) {
            const double* u = arm_index_.data() + e.arm * dim;
            for (std::size_t j = 0; j < dim; ++j) out[j] += e.weight * u[j];
        }
    }
    compute_spf_flat(action_index_, dim, front_);
    return front_[rng_.uniform_index(front_.size())];
}

void ComoUcb::update(std::uint64_t, std::size_t chosen, std::span<const ArmFeedback> feedback) {
    require_actions(actions_);
    check_feedback(*actions_, chosen, feedback);
    for (const ArmFeedback& f : feedback) stats_.record(f.arm, f.reward);
}

// ------------------------------------------------------------- Pareto UCB1

ParetoUcb1::ParetoUcb1(ParetoUcb1Options opts) : opts_(opts) {
    if (!(opts_.k_star > 0.0)) throw ConfigurationError("pareto_ucb1: k_star must be positive");
    if (!(opts_.exploration > 0.0)) throw ConfigurationError("pareto_ucb1: exploration must be positive");
}

void ParetoUcb1::reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) {
    require_actions(actions);
    actions_ = std::move(actions);
    stats_ = ActionStats(actions_->size(), actions_->dimension());
    rng_.seed(seed);
    index_.assign(actions_->size() * actions_->dimension(), 0.0);
    front_.clear();
}

std::size_t ParetoUcb1::select(std::uint64_t t) {
    require_actions(actions_);
    if (t == 0) throw std::domain_error("steps are 1-based");
    if (t <= actions_->size()) return static_cast<std::size_t>(t - 1);

    const std::size_t dim = actions_->dimension();
    const double log_term = std::log(static_cast<double>(t)) +
                            0.25 * std::log(static_cast<double>(dim) * opts_.k_star);
    const double numerator = opts_.exploration * std::max(0.0, log_term);
    for (std::size_t k = 0; k < actions_->size(); ++k) {
        const double radius = std::sqrt(numerator / static_cast<double>(stats_.n[k]));
        const auto mu = stats_.mean(k);
        for (std::size_t j = 0; j < dim; ++j) index_[k * dim + j] = mu[j] + radius;
    }
    compute_spf_flat(index_, dim, front_);
    return front_[rng_.uniform_index(front_.size())];
}

void ParetoUcb1::update(std::uint64_t, std::size_t chosen, std::span<const ArmFeedback> feedback) {
    require_actions(actions_);
    check_feedback(*actions_, chosen, feedback);
    action_reward(*actions_, chosen, feedback, reward_);
    stats_.record(chosen, reward_);
}

// --------------------------------------------------------------------- LLR

void Llr::reset(std::shared_ptr<const ActionSet> actions, std::uint64_t seed) {
    require_actions(actions);
    actions_ = std::move(actions);
    stats_ = ArmStats(actions_->n_arms(), actions_->dimension());
    rng_.seed(seed);
    arm_index_.assign(actions_->n_arms(), 0.0);
}

std::size_t Llr::select(std::uint64_t t) {
    require_actions(actions_);
    if (t == 0) throw std::domain_error("steps are 1-based");
    if (t <= actions_->n_arms()) return initialization_action(*actions_, t, rng_);

    const double l = static_cast<double>(actions_->max_support());
    const double log_t = std::log(static_cast<double>(t));
    for (std::size_t i = 0; i < actions_->n_arms(); ++i) {
        arm_index_[i] = stats_.mean(i)[0] + std::sqrt((l + 1.0) * log_t / static_cast<double>(stats_.m[i]));
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < actions_->size(); ++k) {
        double value = 0.0;
        for (const Action::Entry& e : (*actions_)[k].support()) value += e.weight * arm_index_[e.arm];
        if (value > best_value) {
            best_value = value;
            best = k;
        }
    }
    return best;
}

void Llr::update(std::uint64_t, std::size_t chosen, std::span<const ArmFeedback> feedback) {
    require_actions(actions_);
    check_feedback(*actions_, chosen, feedback);
    for (const ArmFeedback& f : feedback) stats_.record(f.arm, f.reward);
}

// ----------------------------------------------------------------- SO-UCB1

void SoUcb1::reset(std::shared_ptr<const ActionSet> actions, std::uint64_t) {
    require_actions(actions);
    actions_ = std::move(actions);
    stats_ = ActionStats(actions_->size(), actions_->dimension());
}

std::size_t SoUcb1::select(std::uint64_t t) {
    require_actions(actions_);
    if (t == 0) throw std::domain_error("steps are 1-based");
    if (t <= actions_->size()) return static_cast<std::size_t>(t - 1);

    const double log_t = std::log(static_cast<double>(t));
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < actions_->size(); ++k) {
        const double value = stats_.mean(k)[0] + std::sqrt(2.0 * log_t / static_cast<double>(stats_.n[k]));
        if (value > best_value) {
            best_value = value;
            best = k;
        }
    }
    return best;
}

void SoUcb1::update(std::uint64_t, std::size_t chosen, std::span<const ArmFeedback> feedback) {
    require_actions(actions_);
    check_feedback(*actions_, chosen, feedback);
    action_reward(*actions_, chosen, feedback, reward_);
    stats_.record(chosen, reward_);
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg) {
    const bool is_pareto = cfg.id == "pareto_ucb1";
    if (!is_pareto && (cfg.k_star || cfg.exploration)) {
        throw ConfigurationError("policy " + cfg.id + " takes no parameters");
    }
    if (cfg.id == "como_ucb") return std::make_unique<ComoUcb>();
    if (cfg.id == "llr") return std::make_unique<Llr>();
    if (cfg.id == "so_ucb1") return std::make_unique<SoUcb1>();
    if (is_pareto) {
        if (!cfg.k_star) throw ConfigurationError("pareto_ucb1 requires k_star");
        ParetoUcb1Options opts;
        opts.k_star = *cfg.k_star;
        if (cfg.exploration) opts.exploration = *cfg.exploration;
        return std::make_unique<ParetoUcb1>(opts);
    }
    throw ConfigurationError("unknown policy id: " + cfg.id);
}

}  // namespace comomab
