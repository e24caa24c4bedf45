#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace uavtrack {

/// SplitMix64 pseudo-random generator (Steele et al., public-domain finalizer).
/// Chosen over <random> engines because its output stream is fully specified
/// by the algorithm, so seeded scenarios reproduce bit-for-bit on every
/// platform and language. fork() derives independent substreams keyed by an
/// integer (per object, per frame), which keeps generated bundles stable when
/// unrelated parts of a scenario change.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : base_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller; second draw cached.
    double next_gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    /// Poisson via Knuth's product method; adequate for the small rates used here.
    int next_poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

    /// Independent substream derived from the original seed and a key.
    SplitMix64 fork(std::uint64_t key) const {
        std::uint64_t z = base_ + (key + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return SplitMix64(z ^ (z >> 31));
    }

private:
    std::uint64_t base_;
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace uavtrack
