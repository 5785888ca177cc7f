// rng.hpp — Deterministic seeded random numbers for ensemble sampling.
// Self-contained (no std::*_distribution) so that identical seeds give
// identical streams on every platform and standard library.

#pragma once

#include <cmath>
#include <cstdint>

namespace dressim {

// splitmix64 step; also used to derive per-entry sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed for ensemble entry i: hash of (master_seed, i).
inline std::uint64_t sub_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index + 0x517cc1b727220a95ULL);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Canonical double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-half_width, half_width).
    double uniform_symmetric(double half_width) {
        return (2.0 * uniform() - 1.0) * half_width;
    }

    // Box-Muller, zero mean.
    double gaussian(double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * sigma;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta) * sigma;
    }

    // Uniform integer in [lo, hi] by rejection.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return lo + static_cast<int>(x % range);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dressim
