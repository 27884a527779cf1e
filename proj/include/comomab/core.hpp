#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace comomab {

// Thrown when two vectors (or a vector and a problem) disagree on D.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown for malformed problem definitions (bad action sets, bad configs).
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point in objective space: one observation X_i(t) or a mean vector.
class RewardVector {
public:
    RewardVector() = default;
    explicit RewardVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
    RewardVector(std::initializer_list<double> v) : values_(v) {}
    explicit RewardVector(std::vector<double> v) : values_(std::move(v)) {}

    std::size_t dim() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& to_vector() const noexcept { return values_; }

    bool all_finite() const noexcept;
    bool in_unit_cube() const noexcept;

    RewardVector& operator+=(const RewardVector& o);
    RewardVector& add_scaled(double w, const RewardVector& o);
    // Adds the same scalar to every coordinate.
    RewardVector& shift(double eps) noexcept;

    friend bool operator==(const RewardVector&, const RewardVector&) = default;

private:
    std::vector<double> values_;
};

RewardVector operator+(RewardVector a, const RewardVector& b);

// Dominance relations, written as "u <relation> v" from the dominating side.
// Comparisons are exact; there is no tolerance.

/// v is weakly dominated by u: v_j <= u_j for every j.
bool weakly_dominates(std::span<const double> u, std::span<const double> v);
/// Weak dominance plus at least one strict coordinate.
bool dominates(std::span<const double> u, std::span<const double> v);
/// v_j < u_j for every j.
bool super_dominates(std::span<const double> u, std::span<const double> v);
/// Neither vector super-dominates the other.
bool incomparable(std::span<const double> u, std::span<const double> v);

inline bool weakly_dominates(const RewardVector& u, const RewardVector& v) {
    return weakly_dominates(u.values(), v.values());
}
inline bool dominates(const RewardVector& u, const RewardVector& v) {
    return dominates(u.values(), v.values());
}
inline bool super_dominates(const RewardVector& u, const RewardVector& v) {
    return super_dominates(u.values(), v.values());
}
inline bool incomparable(const RewardVector& u, const RewardVector& v) {
    return incomparable(u.values(), v.values());
}

/// Sparse nonnegative weighting of arms. Support is kept in ascending arm order
/// and zero weights are never stored.
class Action {
public:
    struct Entry {
        std::size_t arm;
        double weight;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    Action() = default;
    // Throws ConfigurationError on negative/non-finite weights, arms >= n_arms,
    // duplicate arms, or an empty support after dropping zeros.
    Action(std::size_t n_arms, std::vector<Entry> entries);
    static Action from_map(std::size_t n_arms, const std::map<std::size_t, double>& weights);
    // Unit weight on every listed arm.
    static Action unit(std::size_t n_arms, std::vector<std::size_t> arms);

    std::size_t n_arms() const noexcept { return n_arms_; }
    std::span<const Entry> support() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    bool contains(std::size_t arm) const noexcept;
    double weight(std::size_t arm) const noexcept;
    double max_weight() const noexcept;
    std::vector<double> dense() const;

    friend bool operator==(const Action&, const Action&) = default;

private:
    std::size_t n_arms_ = 0;
    std::vector<Entry> entries_;
};

/// mu_a = sum_i a_i * mu_i over the support of a.
RewardVector action_mean(const Action& a, std::span<const RewardVector> arm_means);

/// Finite enumerated action set with its structural constants.
class ActionSet {
public:
    // Validates that every action spans n_arms and every arm is covered by at
    // least one action.
    ActionSet(std::size_t n_arms, std::size_t dimension, std::vector<Action> actions);

    std::size_t size() const noexcept { return actions_.size(); }
    std::size_t n_arms() const noexcept { return n_arms_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t max_support() const noexcept { return max_support_; }  // L
    double max_weight() const noexcept { return max_weight_; }          // a_max

    const Action& operator[](std::size_t k) const { return actions_[k]; }
    std::span<const Action> actions() const noexcept { return actions_; }
    // Indices of actions whose support contains `arm`, ascending.
    std::span<const std::size_t> actions_with_arm(std::size_t arm) const { return by_arm_.at(arm); }

    std::vector<RewardVector> action_means(std::span<const RewardVector> arm_means) const;

private:
    std::size_t n_arms_;
    std::size_t dimension_;
    std::vector<Action> actions_;
    std::size_t max_support_ = 0;
    double max_weight_ = 0.0;
    std::vector<std::vector<std::size_t>> by_arm_;
};

}  // namespace comomab
