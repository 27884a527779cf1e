#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "comomab/core.hpp"

namespace comomab {

// Front extraction. Results are ascending index lists. Ties are kept: every
// copy of a duplicated mean vector survives together.

/// Indices not super-dominated by any other entry (the super Pareto front).
std::vector<std::size_t> compute_spf(std::span<const RewardVector> means);
/// Indices not dominated by any other entry (the classical Pareto front).
std::vector<std::size_t> compute_pareto_front(std::span<const RewardVector> means);

/// Row-major variant used in the hot loop of the policies: `flat` holds
/// count = flat.size() / dim vectors back to back. `out` is overwritten.
void compute_spf_flat(std::span<const double> flat, std::size_t dim, std::vector<std::size_t>& out);

/// Pareto suboptimality gap in closed form:
/// max(0, max_{f in front} min_j (f_j - mean_j)).
double psg(const RewardVector& mean, std::span<const RewardVector> front);

/// Bisection on the defining predicate "mean + eps is not super-dominated by any
/// front member". Independent of `psg`; used to cross-check it.
double psg_oracle(const RewardVector& mean, std::span<const RewardVector> front, double tol);

struct FrontResult {
    std::vector<std::size_t> spf_indices;
    std::vector<std::size_t> pareto_indices;
};

FrontResult compute_fronts(std::span<const RewardVector> means);

struct GapStats {
    std::vector<double> psg_per_action;
    std::vector<std::size_t> spf_indices;
    // +infinity when every action is in the front.
    double delta_min = std::numeric_limits<double>::infinity();
    double delta_max = 0.0;
};

GapStats gap_stats(std::span<const RewardVector> means);

/// Prefix sums of per-step gaps; entry t is the regret after t + 1 steps.
std::vector<double> cumulative_regret(std::span<const double> selected_gaps);

enum class BoundStatus {
    ok,
    all_optimal,  // delta_min = +inf, bound is 0
    zero_gap,     // delta_min = 0, bound is +inf
};

struct RegretBound {
    double value = 0.0;
    BoundStatus status = BoundStatus::ok;
};

struct BoundInputs {
    double horizon = 0.0;       // T
    std::size_t n_arms = 0;     // N
    std::size_t max_support = 0;  // L
    std::size_t dimension = 0;  // D
    double max_weight = 1.0;    // a_max
    double delta_min = 0.0;
    double delta_max = 0.0;
};

/// Expected-regret upper bound for COMO-UCB:
///   delta_max * (4 a_max^2 N L^2 (L+1) log(T D^{1/4}) / delta_min^2 + N + (pi^2/3) N L)
/// Requires T > N >= 1, L >= 1, D >= 1 (std::domain_error otherwise).
RegretBound theorem1_bound(const BoundInputs& in);

/// D * exp(-2 n k^2): bound on the probability that a D-dimensional sample
/// mean of n observations escapes the k-box around the true mean on one side.
double hoeffding_violation_bound(std::uint64_t n, double k, std::size_t dimension);

}  // namespace comomab
