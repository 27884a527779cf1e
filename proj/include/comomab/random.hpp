#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace comomab {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a, used to turn policy ids into stream keys.
constexpr std::uint64_t hash_name(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

enum class Stream : std::uint64_t { policy = 1, environment = 2, aux = 3 };

/// Counter-style seed derivation. Each (master, run, key, stream) tuple maps to
/// its own seed independent of how many other tuples exist or in what order
/// they are visited.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t key, Stream stream) noexcept {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ mix64(run + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(key + 0x8cb92ba72f3d8dd7ULL));
    h = mix64(h ^ static_cast<std::uint64_t>(stream));
    return h;
}

/// Engine plus the handful of distributions the simulator needs, written out
/// so draws are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    void seed(std::uint64_t s) { engine_.seed(s); }
    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % range);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Exponential with rate lambda (mean 1 / lambda).
    double exponential(double lambda) { return -std::log1p(-uniform01()) / lambda; }

private:
    std::mt19937_64 engine_;
};

}  // namespace comomab
