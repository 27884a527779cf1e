#pragma once

// Independent reference computations for the unit and acceptance suites.
// Nothing here calls into the library routines it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline bool all_less(const Vec& v, const Vec& u) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] < u[j])) return false;
    }
    return true;
}

inline bool pareto_beats(const Vec& u, const Vec& v) {
    bool strict = false;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] > u[j]) return false;
        strict = strict || v[j] < u[j];
    }
    return strict;
}

// O(n^2) pairwise filters.
inline std::vector<std::size_t> spf(const std::vector<Vec>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        bool keep = true;
        for (std::size_t o = 0; o < pts.size(); ++o) {
            if (o != k && all_less(pts[k], pts[o])) keep = false;
        }
        if (keep) out.push_back(k);
    }
    return out;
}

inline std::vector<std::size_t> pareto(const std::vector<Vec>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        bool keep = true;
        for (std::size_t o = 0; o < pts.size(); ++o) {
            if (o != k && pareto_beats(pts[o], pts[k])) keep = false;
        }
        if (keep) out.push_back(k);
    }
    return out;
}

// Smallest w >= 0 with w e^w = x by plain bisection.
inline double lambert_bisect(double x) {
    double lo = 0.0;
    double hi = std::max(1.0, std::log1p(x) + 1.0);
    while (hi * std::exp(hi) < x) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::uint64_t factorial_ratio(std::uint64_t q, std::uint64_t m) {
    std::uint64_t r = 1;
    for (std::uint64_t k = 0; k < m; ++k) r *= q - k;
    return r;
}

// Path count in a DAG given as adjacency over nodes 0..n-1 topologically
// numbered (edges only go from lower to higher index), by dynamic programming.
inline std::uint64_t dag_path_count(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                    std::size_t s, std::size_t d) {
    std::vector<std::uint64_t> ways(n, 0);
    ways[s] = 1;
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& [a, b] : edges) {
            if (a == v) ways[b] += ways[v];
        }
    }
    return ways[d];
}

inline std::vector<Vec> random_points(std::mt19937_64& gen, std::size_t n, std::size_t dim, bool coarse) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> grid(0, 3);
    std::vector<Vec> pts(n, Vec(dim));
    for (auto& p : pts) {
        for (double& x : p) x = coarse ? grid(gen) / 3.0 : u(gen);
    }
    return pts;
}

}  // namespace oracle
