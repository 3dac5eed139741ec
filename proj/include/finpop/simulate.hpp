#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finpop/plans.hpp"
#include "finpop/prior.hpp"

namespace finpop {

struct SimConfig {
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    Prior prior;
    std::int64_t population = 0;
    SamplingPlan plan;
};

/// Occurrence counts of each possible marked count among accepted lots.
struct EmpiricalConditional {
    std::vector<std::int64_t> counts; // size population + 1
    std::int64_t accepted = 0;
    std::int64_t total = 0;
    /// Per-component breakdown when the prior is a mixture, else empty.
    std::vector<std::vector<std::int64_t>> component_counts;

    bool empty() const { return accepted == 0; }
};

/// Seeded lot-by-lot simulation: draw a lot from the prior, inspect it under
/// the plan, and record the true marked count whenever the lot is accepted.
/// Identical config (seed included) reproduces counts exactly.
EmpiricalConditional simulate_conditional(const SimConfig& config);

inline constexpr std::int64_t kDefaultEnumerationLimit = 5000;

/// Exact distribution of the marked count conditional on lot acceptance:
/// prior mass times the acceptance region's hypergeometric mass, normalized.
/// Guards against populations above `population_limit`.
std::vector<double> enumerate_conditional(const Prior& prior, std::int64_t population,
                                          const SamplingPlan& plan,
                                          std::int64_t population_limit = kDefaultEnumerationLimit);

/// Half the L1 distance between two mass functions on the same support.
double total_variation(std::span<const double> a, std::span<const double> b);

/// Side-by-side comparison of post-acceptance inference routes for a
/// mixture prior: the conjugate psp posterior built from the good component
/// alone, the exact conditional under the full mixture, and the exact
/// conditional restricted to the good component.
struct PspMixtureReport {
    std::size_t good_index = 0;
    /// Conjugate psp posterior per accepted outcome a = 0..acceptance_number.
    std::vector<std::vector<double>> psp_posteriors;
    std::vector<double> mixture_conditional;
    std::vector<double> good_component_conditional;
    // Total-variation distances; the a = 0 psp table stands in for the
    // psp route.
    double tv_psp_vs_mixture = 0.0;
    double tv_psp_vs_good = 0.0;
    double tv_good_vs_mixture = 0.0;
};

PspMixtureReport psp_vs_mixture_report(const Prior& mixed, std::size_t good_index,
                                       std::int64_t population, const SamplingPlan& plan);

} // namespace finpop
