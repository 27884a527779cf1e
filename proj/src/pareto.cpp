#include "comomab/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace comomab {

namespace {

void require_nonempty_uniform(std::span<const RewardVector> means) {
    if (means.empty()) throw std::domain_error("front of an empty set is undefined");
    const std::size_t d = means.front().dim();
    for (const RewardVector& m : means) {
        if (m.dim() != d) throw DimensionError("mean vectors have mixed dimensions");
    }
}

template <class Beats>
std::vector<std::size_t> filter_front(std::span<const RewardVector> means, Beats beats) {
    require_nonempty_uniform(means);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < means.size(); ++k) {
        bool beaten = false;
        for (std::size_t other = 0; other < means.size() && !beaten; ++other) {
            beaten = other != k && beats(means[other], means[k]);
        }
        if (!beaten) out.push_back(k);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> compute_spf(std::span<const RewardVector> means) {
    return filter_front(means, [](const RewardVector& u, const RewardVector& v) { return super_dominates(u, v); });
}

std::vector<std::size_t> compute_pareto_front(std::span<const RewardVector> means) {
    return filter_front(means, [](const RewardVector& u, const RewardVector& v) { return dominates(u, v); });
}

void compute_spf_flat(std::span<const double> flat, std::size_t dim, std::vector<std::size_t>& out) {
    out.clear();
    if (dim == 0 || flat.size() % dim != 0) throw DimensionError("flat buffer is not a whole number of vectors");
    const std::size_t count = flat.size() / dim;
    if (count == 0) throw std::domain_error("front of an empty set is undefined");

    // The last super-dominator found is tried first; in a dense front most
    // losers fall to the same few leaders.
    std::size_t hint = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double* v = flat.data() + k * dim;
        auto beats = [&](std::size_t other) {
            const double* u = flat.data() + other * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                if (!(v[j] < u[j])) return false;
            }
            return true;
        };
        if (hint != k && beats(hint)) continue;
        bool beaten = false;
        for (std::size_t other = 0; other < count; ++other) {
            if (other != k && beats(other)) {
                hint = other;
                beaten = true;
                break;
            }
        }
        if (!beaten) out.push_back(k);
    }
}

double psg(const RewardVector& mean, std::span<const RewardVector> front) {
    if (front.empty()) throw std::domain_error("psg needs a nonempty front");
    double gap = 0.0;
    for (const RewardVector& f : front) {
        if (f.dim() != mean.dim()) throw DimensionError("psg dimension mismatch");
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < mean.dim(); ++j) smallest = std::min(smallest, f[j] - mean[j]);
        gap = std::max(gap, smallest);
    }
    return gap;
}

double psg_oracle(const RewardVector& mean, std::span<const RewardVector> front, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("psg_oracle tolerance must be positive");
    if (front.empty()) throw std::domain_error("psg_oracle needs a nonempty front");

    auto clear_at = [&](double eps) {
        RewardVector boosted = mean;
        boosted.shift(eps);
        return std::none_of(front.begin(), front.end(),
                            [&](const RewardVector& f) { return super_dominates(f, boosted); });
    };
    if (clear_at(0.0)) return 0.0;

    double lo_coord = std::numeric_limits<double>::infinity();
    double hi_coord = -std::numeric_limits<double>::infinity();
    auto widen = [&](const RewardVector& r) {
        for (double x : r.values()) {
            lo_coord = std::min(lo_coord, x);
            hi_coord = std::max(hi_coord, x);
        }
    };
    widen(mean);
    for (const RewardVector& f : front) widen(f);

    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(mean.dim()) * (hi_coord - lo_coord));
    while (!clear_at(hi)) hi *= 2.0;
    while (hi - lo > tol * 0.25) {
        const double mid = 0.5 * (lo + hi);
        if (clear_at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

FrontResult compute_fronts(std::span<const RewardVector> means) {
    return {compute_spf(means), compute_pareto_front(means)};
}

GapStats gap_stats(std::span<const RewardVector> means) {
    GapStats stats;
    stats.spf_indices = compute_spf(means);
    std::vector<RewardVector> front;
    front.reserve(stats.spf_indices.size());
    for (std::size_t k : stats.spf_indices) front.push_back(means[k]);

    stats.psg_per_action.assign(means.size(), 0.0);
    std::vector<bool> in_front(means.size(), false);
    for (std::size_t k : stats.spf_indices) in_front[k] = true;
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (in_front[k]) continue;
        const double gap = psg(means[k], front);
        stats.psg_per_action[k] = gap;
        stats.delta_min = std::min(stats.delta_min, gap);
        stats.delta_max = std::max(stats.delta_max, gap);
    }
    return stats;
}

std::vector<double> cumulative_regret(std::span<const double> selected_gaps) {
    std::vector<double> out;
    out.reserve(selected_gaps.size());
    double total = 0.0;
    for (double g : selected_gaps) {
        if (!(g >= 0.0)) throw std::domain_error("gaps must be nonnegative");
        total += g;
        out.push_back(total);
    }
    return out;
}

RegretBound theorem1_bound(const BoundInputs& in) {
    if (in.n_arms < 1 || in.horizon <= static_cast<double>(in.n_arms)) throw std::domain_error("theorem1_bound requires T > N >= 1");
    if (in.max_support < 1 || in.dimension < 1) throw std::domain_error("theorem1_bound requires L >= 1 and D >= 1");
    if (in.delta_max == 0.0 || std::isinf(in.delta_min)) return {0.0, BoundStatus::all_optimal};
    if (in.delta_min <= 0.0) return {std::numeric_limits<double>::infinity(), BoundStatus::zero_gap};

    const double n = static_cast<double>(in.n_arms);
    const double l = static_cast<double>(in.max_support);
    const double log_term =
        std::log(in.horizon) + 0.25 * std::log(static_cast<double>(in.dimension));
    const double exploration =
        4.0 * in.max_weight * in.max_weight * n * l * l * (l + 1.0) * log_term / (in.delta_min * in.delta_min);
    const double value =
        in.delta_max * (exploration + n + (std::numbers::pi * std::numbers::pi / 3.0) * n * l);
    return {value, BoundStatus::ok};
}

double hoeffding_violation_bound(std::uint64_t n, double k, std::size_t dimension) {
    return static_cast<double>(dimension) * std::exp(-2.0 * static_cast<double>(n) * k * k);
}

}  // namespace comomab
