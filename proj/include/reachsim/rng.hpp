#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace reachsim {

/// Seeded generator with portable conversions.
///
/// The std distributions are implementation-defined, so the conversions
/// from raw 64-bit draws are done here to keep runs bit-identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n) {
        // Rejection keeps the draw unbiased.
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo + 1)));
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace reachsim
