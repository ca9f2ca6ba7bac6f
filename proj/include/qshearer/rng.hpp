#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qshearer {

// Combine values into a stream key. Used to derive independent per-slot
// RNG streams from (seed, sweep, slot, ...) so parallel and serial
// execution produce identical draws.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// SplitMix64 generator. The output sequence is fully specified by the
// seed, independent of platform and standard-library version; every
// randomized routine in this project draws from it so that equal seeds
// give bit-identical results everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller (one value per call; the partner
    // value is discarded to keep the draw count per call fixed).
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Poisson by inversion (sequential search). Adequate for the means
    // used here (k*alpha well below the underflow limit near 700).
    int poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("Rng::poisson: mean must be >= 0");
        if (mean > 500.0) throw std::invalid_argument("Rng::poisson: mean too large for inversion");
        if (mean == 0.0) return 0;
        const double u = uniform01();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

private:
    std::uint64_t state_;
};

}  // namespace qshearer
