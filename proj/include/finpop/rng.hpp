#pragma once

// PCG XSH-RR 64/32 (O'Neill 2014, pcg-random.org) plus the small discrete
// samplers the simulator needs. One generator per trial, keyed by the trial
// index through the PCG stream-selection constant, so trials can be
// replayed or partitioned across workers without changing the results.

#include <cstdint>

namespace finpop {

class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream)
        : state_(0), inc_((stream << 1u) | 1u) {
        next();
        state_ += seed;
        next();
    }

    std::uint32_t next() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted =
            static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Uniform in [0, bound); rejection keeps it exactly uniform.
    std::uint32_t next_below(std::uint32_t bound) {
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        const std::uint64_t hi = next() >> 5;  // 27 bits
        const std::uint64_t lo = next() >> 6;  // 26 bits
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Uniform integer in [lo, hi] inclusive.
std::int64_t draw_uniform_int(Pcg32& rng, std::int64_t lo, std::int64_t hi);

/// Binomial(trials, p) by waiting times between successes (geometric skips),
/// O(trials * min(p, 1-p)) expected work.
std::int64_t draw_binomial(Pcg32& rng, std::int64_t trials, double p);

/// Hypergeometric draw: number of marked items in a sample of `sample`
/// taken without replacement, realized as sequential urn draws.
std::int64_t draw_hypergeometric(Pcg32& rng, std::int64_t population,
                                 std::int64_t marked, std::int64_t sample);

} // namespace finpop
