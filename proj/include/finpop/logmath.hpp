#pragma once

// Log-space combinatorial and distributional primitives. Everything here is
// a pure function; probabilities leave log space only at the call boundary.

#include <cstdint>
#include <limits>
#include <span>

namespace finpop {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln C(n, k). Returns -inf when k < 0 or k > n, so sums over a full count
/// range truncate themselves without special-casing.
double log_choose(std::int64_t n, std::int64_t k);

/// ln(sum of exp(t)) over the terms, max-shifted for stability.
/// Empty input yields -inf.
double log_sum_exp(std::span<const double> terms);

/// P(sample of size `sample` drawn without replacement from a population of
/// `population` items, `marked` of them marked, contains no marked item):
/// C(population-marked, sample) / C(population, sample).
double hypergeom_zero_prob(std::int64_t population, std::int64_t marked,
                           std::int64_t sample);

/// Hypergeometric pmf: probability of seeing `observed` marked items in the
/// sample. Out-of-support arguments return 0; only a malformed frame
/// (sample > population, negative counts) is an error.
double hypergeom_pmf(std::int64_t population, std::int64_t marked,
                     std::int64_t sample, std::int64_t observed);

/// Binomial(trials, p) pmf at `count`. p = 0 and p = 1 are exact point
/// masses; everything else goes through log space.
double binom_pmf(std::int64_t trials, double p, std::int64_t count);

/// ln of the Binomial(trials, p) pmf; -inf where the mass is zero.
double log_binom_pmf(std::int64_t trials, double p, std::int64_t count);

/// Binomial(trials, p) CDF at `count`: pmf terms summed smallest-first and
/// clamped to [0, 1].
double binom_cdf(std::int64_t trials, double p, std::int64_t count);

} // namespace finpop
