#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finpop/prior.hpp"

namespace finpop {

/// Normalized posterior over the number of attribute-bearing items,
/// together with the evidence it conditions on and the engine that
/// produced it ("general" or "conjugate-psp").
struct PosteriorTable {
    std::vector<double> mass; // size population + 1
    LotFrame frame;
    std::string engine;

    /// Pr{count <= k}; k below the support gives 0, above gives 1.
    double at_most(std::int64_t k) const;
};

/// General discrete-prior engine: mass[A] proportional to
/// hypergeometric likelihood times prior mass, normalized in log space.
/// Throws `incompatible` when the prior puts no mass on any count the
/// evidence allows.
PosteriorTable posterior_general(const Prior& prior, const LotFrame& frame);

/// Closed form for the uniform prior at observed = 0: (n+1)/(N+1).
double p_zero_uniform(std::int64_t population, std::int64_t sample);

/// Closed form for the bounded-uniform prior at observed = 0:
/// C(N,n) / [C(N+1,n+1) - C(N-M,n+1)], evaluated in log space.
double p_zero_bounded_uniform(std::int64_t population, std::int64_t sample,
                              std::int64_t max_count);

/// Conjugate engine for the binomial partially specified prior: the count
/// beyond the observed ones is Binomial(population - sample, delta).
PosteriorTable posterior_psp(const LotFrame& frame, double delta);

/// Closed form Pr{count = 0 | observed = 0} under the psp prior:
/// (1 - delta)^(population - sample).
double p_zero_psp(std::int64_t population, std::int64_t sample, double delta);

/// Pr{count <= k | observed} under the psp prior: the Binomial
/// (population - sample, delta) CDF at k - observed; 0 when k < observed.
double p_at_most_k_psp(const LotFrame& frame, double delta, std::int64_t k);

struct AssuranceReport {
    double p_zero = 0.0;
    std::optional<double> p_at_most_k;
    std::optional<std::int64_t> k;
    std::optional<double> marginal_accept;
    std::string engine;
    LotFrame frame;
};

/// Scalar assurance summary. Dispatches to the matching closed form when
/// one covers the whole request, and to the general engine otherwise.
AssuranceReport assure(const Prior& prior, const LotFrame& frame,
                       std::optional<std::int64_t> k);

} // namespace finpop
