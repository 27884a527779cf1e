#include "comomab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace comomab {

namespace {

void check_same_dim(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw DimensionError("reward vector length mismatch: " + std::to_string(u.size()) + " vs " +
                             std::to_string(v.size()));
    }
}

}  // namespace

bool RewardVector::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool RewardVector::in_unit_cube() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

RewardVector& RewardVector::operator+=(const RewardVector& o) {
    check_same_dim(values_, o.values_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}

RewardVector& RewardVector::add_scaled(double w, const RewardVector& o) {
    check_same_dim(values_, o.values_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += w * o.values_[j];
    return *this;
}

RewardVector& RewardVector::shift(double eps) noexcept {
    for (double& x : values_) x += eps;
    return *this;
}

RewardVector operator+(RewardVector a, const RewardVector& b) {
    a += b;
    return a;
}

bool weakly_dominates(std::span<const double> u, std::span<const double> v) {
    check_same_dim(u, v);
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (v[j] > u[j]) return false;
    }
    return true;
}

bool dominates(std::span<const double> u, std::span<const double> v) {
    check_same_dim(u, v);
    bool strict = false;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (v[j] > u[j]) return false;
        if (v[j] < u[j]) strict = true;
    }
    return strict;
}

bool super_dominates(std::span<const double> u, std::span<const double> v) {
    check_same_dim(u, v);
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (!(v[j] < u[j])) return false;
    }
    return true;
}

bool incomparable(std::span<const double> u, std::span<const double> v) {
    return !super_dominates(u, v) && !super_dominates(v, u);
}

Action::Action(std::size_t n_arms, std::vector<Entry> entries) : n_arms_(n_arms) {
    std::erase_if(entries, [](const Entry& e) { return e.weight == 0.0; });
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.arm < b.arm; });
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const Entry& e = entries[k];
        if (e.arm >= n_arms) {
            throw ConfigurationError("action references arm " + std::to_string(e.arm) + " but N = " +
                                     std::to_string(n_arms));
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw ConfigurationError("action weights must be finite and nonnegative");
        }
        if (k > 0 && entries[k - 1].arm == e.arm) {
            throw ConfigurationError("action lists arm " + std::to_string(e.arm) + " twice");
        }
    }
    if (entries.empty()) throw ConfigurationError("action has empty support");
    entries_ = std::move(entries);
}

Action Action::from_map(std::size_t n_arms, const std::map<std::size_t, double>& weights) {
    std::vector<Entry> entries;
    entries.reserve(weights.size());
    for (const auto& [arm, w] : weights) entries.push_back({arm, w});
    return Action(n_arms, std::move(entries));
}

Action Action::unit(std::size_t n_arms, std::vector<std::size_t> arms) {
    std::vector<Entry> entries;
    entries.reserve(arms.size());
    for (std::size_t arm : arms) entries.push_back({arm, 1.0});
    return Action(n_arms, std::move(entries));
}

bool Action::contains(std::size_t arm) const noexcept {
    return std::binary_search(entries_.begin(), entries_.end(), Entry{arm, 0.0},
                              [](const Entry& a, const Entry& b) { return a.arm < b.arm; });
}

double Action::weight(std::size_t arm) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), arm,
                               [](const Entry& e, std::size_t a) { return e.arm < a; });
    return (it != entries_.end() && it->arm == arm) ? it->weight : 0.0;
}

double Action::max_weight() const noexcept {
    double m = 0.0;
    for (const Entry& e : entries_) m = std::max(m, e.weight);
    return m;
}

std::vector<double> Action::dense() const {
    std::vector<double> out(n_arms_, 0.0);
    for (const Entry& e : entries_) out[e.arm] = e.weight;
    return out;
}

RewardVector action_mean(const Action& a, std::span<const RewardVector> arm_means) {
    if (arm_means.size() != a.n_arms()) {
        throw DimensionError("expected " + std::to_string(a.n_arms()) + " arm means, got " +
                             std::to_string(arm_means.size()));
    }
    RewardVector out(arm_means.front().dim());
    for (const Action::Entry& e : a.support()) out.add_scaled(e.weight, arm_means[e.arm]);
    return out;
}

ActionSet::ActionSet(std::size_t n_arms, std::size_t dimension, std::vector<Action> actions)
    : n_arms_(n_arms), dimension_(dimension), actions_(std::move(actions)), by_arm_(n_arms) {
    if (dimension_ == 0) throw ConfigurationError("dimension D must be at least 1");
    if (n_arms_ == 0) throw ConfigurationError("need at least one arm");
    if (actions_.empty()) throw ConfigurationError("action set is empty");
    for (std::size_t k = 0; k < actions_.size(); ++k) {
        const Action& a = actions_[k];
        if (a.n_arms() != n_arms_) {
            throw ConfigurationError("action " + std::to_string(k) + " has dense length " +
                                     std::to_string(a.n_arms()) + ", expected " + std::to_string(n_arms_));
        }
        max_support_ = std::max(max_support_, a.support_size());
        max_weight_ = std::max(max_weight_, a.max_weight());
        for (const Action::Entry& e : a.support()) by_arm_[e.arm].push_back(k);
    }
    for (std::size_t i = 0; i < n_arms_; ++i) {
        if (by_arm_[i].empty()) {
            throw ConfigurationError("arm " + std::to_string(i) + " is not in the support of any action");
        }
    }
}

std::vector<RewardVector> ActionSet::action_means(std::span<const RewardVector> arm_means) const {
    std::vector<RewardVector> out;
    out.reserve(actions_.size());
    for (const Action& a : actions_) out.push_back(action_mean(a, arm_means));
    return out;
}

}  // namespace comomab
