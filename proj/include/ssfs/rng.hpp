#pragma once
#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace ssfs {

// splitmix64 finalizer; bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the seed of substream (stream, index) from a master seed.
// Used everywhere a loop needs per-iteration RNG state that is independent
// of loop order and parallel schedule.
constexpr std::uint64_t hash_seed(std::uint64_t master, std::uint64_t stream,
                                  std::uint64_t index) noexcept {
    return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// Deterministic RNG with fixed transforms (no std::*_distribution, whose
// output is implementation-defined). Identical seeds give identical streams
// on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform double in [0,1) with 53 random bits
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; generates pairs, caches the second
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // unit-scale Laplace via inverse CDF
    double laplace() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }

    // unbiased integer in [0,n) by rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r = eng_();
        while (r >= limit) r = eng_();
        return r % n;
    }

    // m distinct indices from [0,n), uniform without replacement
    // (partial Fisher-Yates; order is part of the deterministic contract)
    std::vector<int> sample_without_replacement(int n, int m) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (int j = 0; j < m; ++j) {
            const int r = j + static_cast<int>(below(static_cast<std::uint64_t>(n - j)));
            std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(r)]);
        }
        idx.resize(static_cast<std::size_t>(m));
        return idx;
    }

private:
    std::mt19937_64 eng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace ssfs
