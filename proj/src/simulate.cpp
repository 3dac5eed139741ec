#include "finpop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finpop/error.hpp"
#include "finpop/inference.hpp"
#include "finpop/logmath.hpp"
#include "finpop/rng.hpp"

namespace finpop {

std::int64_t draw_uniform_int(Pcg32& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span <= 0xffffffffull) {
        return lo + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint32_t>(span)));
    }
    // 64-bit range via two words and rejection
    for (;;) {
        const std::uint64_t r =
            (static_cast<std::uint64_t>(rng.next()) << 32) | rng.next();
        if (r < span * (0xffffffffffffffffull / span)) {
            return lo + static_cast<std::int64_t>(r % span);
        }
    }
}

std::int64_t draw_binomial(Pcg32& rng, std::int64_t trials, double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    if (p > 0.5) {
        return trials - draw_binomial(rng, trials, 1.0 - p);
    }
    // Skip between successes is geometric; expected cost trials * p draws.
    const double log_q = std::log1p(-p);
    std::int64_t successes = 0;
    std::int64_t position = 0;
    for (;;) {
        const double u = rng.next_unit();
        const double skip = std::floor(std::log1p(-u) / log_q);
        position += static_cast<std::int64_t>(skip) + 1;
        if (position > trials) {
            return successes;
        }
        ++successes;
    }
}

std::int64_t draw_hypergeometric(Pcg32& rng, std::int64_t population,
                                 std::int64_t marked, std::int64_t sample) {
    std::int64_t remaining = population;
    std::int64_t marked_left = marked;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < sample && marked_left > 0; ++i) {
        const double u = rng.next_unit();
        if (u * static_cast<double>(remaining) < static_cast<double>(marked_left)) {
            ++hits;
            --marked_left;
        }
        --remaining;
    }
    return hits;
}

namespace {

// Lot-value sampler resolved once per config, not per trial.
class LotSampler {
public:
    LotSampler(const Prior& prior, std::int64_t population) : population_(population) {
        switch (prior.kind()) {
            case PriorKind::uniform:
                max_ = population;
                break;
            case PriorKind::bounded_uniform:
                max_ = prior.max_count();
                if (max_ > population) {
                    raise(ErrorCode::invalid_argument,
                          "simulate: bounded-uniform max count exceeds population");
                }
                break;
            case PriorKind::binomial_psp:
                delta_ = prior.delta();
                break;
            case PriorKind::mixed:
                components_ = prior.components();
                cumulative_weights_.reserve(components_.size());
                {
                    double acc = 0.0;
                    for (const auto& c : components_) {
                        acc += c.weight;
                        cumulative_weights_.push_back(acc);
                    }
                    cumulative_weights_.back() = 1.0;
                }
                break;
            case PriorKind::tabulated: {
                const std::vector<double> mass = prior.mass(population);
                cumulative_mass_.reserve(mass.size());
                double acc = 0.0;
                for (double m : mass) {
                    acc += m;
                    cumulative_mass_.push_back(acc);
                }
                cumulative_mass_.back() = 1.0;
                break;
            }
        }
        kind_ = prior.kind();
    }

    std::size_t component_count() const { return components_.size(); }

    // Returns the drawn marked count; for mixtures also the component index.
    std::pair<std::int64_t, std::size_t> draw(Pcg32& rng) const {
        switch (kind_) {
            case PriorKind::uniform:
            case PriorKind::bounded_uniform:
                return {draw_uniform_int(rng, 0, max_), 0};
            case PriorKind::binomial_psp:
                return {draw_binomial(rng, population_, delta_), 0};
            case PriorKind::mixed: {
                const double u = rng.next_unit();
                std::size_t idx = 0;
                while (idx + 1 < cumulative_weights_.size() && u >= cumulative_weights_[idx]) {
                    ++idx;
                }
                return {draw_binomial(rng, population_, components_[idx].p), idx};
            }
            case PriorKind::tabulated:
            default: {
                const double u = rng.next_unit();
                const auto it = std::upper_bound(cumulative_mass_.begin(),
                                                 cumulative_mass_.end(), u);
                const std::size_t idx = std::min<std::size_t>(
                    static_cast<std::size_t>(it - cumulative_mass_.begin()),
                    cumulative_mass_.size() - 1);
                return {static_cast<std::int64_t>(idx), 0};
            }
        }
    }

private:
    PriorKind kind_ = PriorKind::uniform;
    std::int64_t population_ = 0;
    std::int64_t max_ = 0;
    double delta_ = 0.0;
    std::vector<MixtureComponent> components_;
    std::vector<double> cumulative_weights_;
    std::vector<double> cumulative_mass_;
};

} // namespace

EmpiricalConditional simulate_conditional(const SimConfig& config) {
    if (config.trials < 1) {
        raise(ErrorCode::invalid_argument, "simulate: trials must be at least 1");
    }
    config.plan.validate();
    if (config.plan.sample > config.population) {
        raise(ErrorCode::invalid_argument, "simulate: plan sample size exceeds population");
    }
    const LotSampler sampler(config.prior, config.population);

    EmpiricalConditional result;
    result.total = config.trials;
    result.counts.assign(static_cast<std::size_t>(config.population) + 1, 0);
    if (sampler.component_count() > 0) {
        result.component_counts.assign(sampler.component_count(), result.counts);
    }

    const std::int64_t ac = config.plan.acceptance_number;
    for (std::int64_t trial = 0; trial < config.trials; ++trial) {
        Pcg32 rng(config.seed, static_cast<std::uint64_t>(trial));
        const auto [marked, component] = sampler.draw(rng);

        // Inspect sequentially; once the acceptance number is exceeded the
        // verdict is fixed, so the remaining draws are skipped.
        std::int64_t remaining = config.population;
        std::int64_t marked_left = marked;
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < config.plan.sample && marked_left > 0 && hits <= ac; ++i) {
            const double u = rng.next_unit();
            if (u * static_cast<double>(remaining) < static_cast<double>(marked_left)) {
                ++hits;
                --marked_left;
            }
            --remaining;
        }
        if (hits <= ac) {
            ++result.accepted;
            ++result.counts[static_cast<std::size_t>(marked)];
            if (!result.component_counts.empty()) {
                ++result.component_counts[component][static_cast<std::size_t>(marked)];
            }
        }
    }
    return result;
}

std::vector<double> enumerate_conditional(const Prior& prior, std::int64_t population,
                                          const SamplingPlan& plan,
                                          std::int64_t population_limit) {
    if (population_limit <= 0) {
        population_limit = kDefaultEnumerationLimit;
    }
    if (population > population_limit) {
        raise(ErrorCode::cost_guard,
              "enumerate_conditional: population " + std::to_string(population) +
                  " exceeds the enumeration limit " + std::to_string(population_limit));
    }
    plan.validate();
    if (plan.sample > population) {
        raise(ErrorCode::invalid_argument,
              "enumerate_conditional: plan sample size exceeds population");
    }

    const std::vector<double> prior_mass = prior.mass(population);
    std::vector<double> unnorm(prior_mass.size(), 0.0);
    double norm = 0.0;
    for (std::int64_t marked = 0; marked <= population; ++marked) {
        const std::size_t i = static_cast<std::size_t>(marked);
        if (prior_mass[i] == 0.0) continue;
        double accept = 0.0;
        for (std::int64_t j = 0; j <= plan.acceptance_number; ++j) {
            accept += hypergeom_pmf(population, marked, plan.sample, j);
        }
        unnorm[i] = prior_mass[i] * accept;
        norm += unnorm[i];
    }
    if (norm <= 0.0) {
        raise(ErrorCode::incompatible,
              "enumerate_conditional: acceptance has probability zero under this prior");
    }
    for (double& v : unnorm) {
        v /= norm;
    }
    return unnorm;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        raise(ErrorCode::invalid_argument,
              "total_variation: mass functions differ in support size");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return 0.5 * sum;
}

PspMixtureReport psp_vs_mixture_report(const Prior& mixed, std::size_t good_index,
                                       std::int64_t population, const SamplingPlan& plan) {
    const Prior good = mixed.restrict_to_component(good_index);
    plan.validate();

    PspMixtureReport report;
    report.good_index = good_index;
    report.psp_posteriors.reserve(static_cast<std::size_t>(plan.acceptance_number) + 1);
    for (std::int64_t a = 0; a <= plan.acceptance_number; ++a) {
        report.psp_posteriors.push_back(
            posterior_psp(LotFrame{population, plan.sample, a}, good.delta()).mass);
    }
    report.mixture_conditional = enumerate_conditional(mixed, population, plan);
    report.good_component_conditional = enumerate_conditional(good, population, plan);

    const auto& psp_zero = report.psp_posteriors.front();
    report.tv_psp_vs_mixture = total_variation(psp_zero, report.mixture_conditional);
    report.tv_psp_vs_good = total_variation(psp_zero, report.good_component_conditional);
    report.tv_good_vs_mixture =
        total_variation(report.good_component_conditional, report.mixture_conditional);
    return report;
}

} // namespace finpop
