#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finpop/prior.hpp"

namespace finpop {

/// Single-sampling attribute plan: inspect `sample` items, accept the lot
/// when at most `acceptance_number` of them carry the attribute.
struct SamplingPlan {
    std::int64_t sample = 1;
    std::int64_t acceptance_number = 0;
    std::optional<double> aql; // fraction, e.g. 0.001 for 0.10%
    std::optional<std::pair<std::int64_t, std::int64_t>> lot_range;

    void validate() const;
};

struct Decision {
    bool accepted = false;
    std::int64_t observed = 0;
    SamplingPlan plan;
};

/// Accept iff observed <= acceptance number.
Decision decide(const SamplingPlan& plan, std::int64_t observed);

/// Expected attribute proportion in an accepted lot, elicited from the AQL.
double elicit_delta(double aql, double factor = 0.5);

/// k = floor(population * aql), guarded so exact decimal products such as
/// 10000 * 0.004 do not truncate one short.
std::int64_t quality_threshold_k(std::int64_t population, double aql);

/// Marginal probability that a sample of `sample` items is attribute-free
/// under the psp prior: (1 - delta)^sample.
double marginal_accept_psp(std::int64_t sample, double delta);

/// Marginal acceptance probability under any prior: the acceptance region's
/// hypergeometric mass averaged over the prior.
double marginal_accept_general(const Prior& prior, std::int64_t population,
                               const SamplingPlan& plan);

struct OcPoint {
    std::int64_t marked = 0;
    double accept_prob = 0.0;
};

/// Operating characteristic: acceptance probability per hypothesized count
/// of attribute-bearing items.
std::vector<OcPoint> oc_curve(const SamplingPlan& plan, std::int64_t population,
                              std::span<const std::int64_t> marked_counts);

/// Plan table indexed by (lot-size range, AQL), loaded from CSV with header
/// lot_min,lot_max,aql,n,ac. Ranges for the same AQL must not overlap.
class PlanTable {
public:
    static PlanTable load(const std::string& path);
    static PlanTable parse(std::string_view text, const std::string& source_name = "<input>");

    const std::vector<SamplingPlan>& plans() const { return plans_; }

    /// The plan whose lot range contains `lot_size` with an exact AQL match;
    /// throws `no_plan` when none does.
    const SamplingPlan& lookup(std::int64_t lot_size, double aql) const;

private:
    std::vector<SamplingPlan> plans_;
};

} // namespace finpop
