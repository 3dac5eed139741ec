#include "finpop/inference.hpp"

#include <algorithm>
#include <cmath>

#include "finpop/error.hpp"
#include "finpop/logmath.hpp"

namespace finpop {

double PosteriorTable::at_most(std::int64_t k) const {
    if (k < 0) {
        return 0.0;
    }
    const std::int64_t top = std::min<std::int64_t>(k, static_cast<std::int64_t>(mass.size()) - 1);
    double sum = 0.0;
    for (std::int64_t a = 0; a <= top; ++a) {
        sum += mass[static_cast<std::size_t>(a)];
    }
    return std::min(sum, 1.0);
}

PosteriorTable posterior_general(const Prior& prior, const LotFrame& frame) {
    frame.validate();
    const std::int64_t population = frame.population;
    const std::vector<double> log_prior = prior.log_mass(population);

    const double log_norm_choose = log_choose(population, frame.sample);
    std::vector<double> log_unnorm(log_prior.size(), kNegInf);
    for (std::int64_t count = 0; count <= population; ++count) {
        const std::size_t i = static_cast<std::size_t>(count);
        if (log_prior[i] == kNegInf) {
            continue;
        }
        // log likelihood; -inf outside the support {observed..population-sample+observed}
        const double log_like = log_choose(count, frame.observed) +
                                log_choose(population - count, frame.sample - frame.observed) -
                                log_norm_choose;
        log_unnorm[i] = log_prior[i] + log_like;
    }

    const double log_norm = log_sum_exp(log_unnorm);
    if (log_norm == kNegInf) {
        raise(ErrorCode::incompatible,
              "incompatible prior/evidence: the prior puts no mass on any count "
              "compatible with the observed sample");
    }

    PosteriorTable table;
    table.frame = frame;
    table.engine = "general";
    table.mass.resize(log_prior.size());
    for (std::size_t i = 0; i < log_unnorm.size(); ++i) {
        table.mass[i] = std::exp(log_unnorm[i] - log_norm);
    }
    return table;
}

double p_zero_uniform(std::int64_t population, std::int64_t sample) {
    if (population < 0 || sample < 0 || sample > population) {
        raise(ErrorCode::invalid_argument,
              "p_zero_uniform: need 0 <= sample <= population");
    }
    return static_cast<double>(sample + 1) / static_cast<double>(population + 1);
}

double p_zero_bounded_uniform(std::int64_t population, std::int64_t sample,
                              std::int64_t max_count) {
    if (population < 0 || sample < 0 || sample > population) {
        raise(ErrorCode::invalid_argument,
              "p_zero_bounded_uniform: need 0 <= sample <= population");
    }
    if (max_count < 0 || max_count > population) {
        raise(ErrorCode::invalid_argument,
              "p_zero_bounded_uniform: need 0 <= max_count <= population");
    }
    // C(N,n) / [C(N+1,n+1) - C(N-M,n+1)] with the denominator expanded as
    // the sum of C(N-A,n) over A = 0..M; each term is a falling product of
    // the previous one, which keeps the whole thing a couple of ulps from
    // exact where the log-gamma route loses ~1e-11.
    double term = 1.0; // C(N-A,n) / C(N,n) at A = 0
    double sum = 0.0;
    for (std::int64_t marked = 0; marked <= max_count && term > 0.0; ++marked) {
        sum += term;
        term *= static_cast<double>(population - sample - marked) /
                static_cast<double>(population - marked);
    }
    return 1.0 / sum;
}

PosteriorTable posterior_psp(const LotFrame& frame, double delta) {
    frame.validate();
    if (!(delta >= 0.0 && delta <= 1.0)) {
        raise(ErrorCode::invalid_argument, "posterior_psp: delta must lie in [0, 1]");
    }
    const std::int64_t remaining = frame.population - frame.sample;

    PosteriorTable table;
    table.frame = frame;
    table.engine = "conjugate-psp";
    table.mass.assign(static_cast<std::size_t>(frame.population) + 1, 0.0);
    for (std::int64_t extra = 0; extra <= remaining; ++extra) {
        table.mass[static_cast<std::size_t>(frame.observed + extra)] =
            binom_pmf(remaining, delta, extra);
    }
    return table;
}

double p_zero_psp(std::int64_t population, std::int64_t sample, double delta) {
    if (population < 0 || sample < 0 || sample > population) {
        raise(ErrorCode::invalid_argument, "p_zero_psp: need 0 <= sample <= population");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        raise(ErrorCode::invalid_argument, "p_zero_psp: delta must lie in [0, 1]");
    }
    const std::int64_t remaining = population - sample;
    if (delta == 1.0) {
        return remaining == 0 ? 1.0 : 0.0;
    }
    return std::exp(static_cast<double>(remaining) * std::log1p(-delta));
}

double p_at_most_k_psp(const LotFrame& frame, double delta, std::int64_t k) {
    frame.validate();
    if (!(delta >= 0.0 && delta <= 1.0)) {
        raise(ErrorCode::invalid_argument, "p_at_most_k_psp: delta must lie in [0, 1]");
    }
    if (k < frame.observed) {
        return 0.0;
    }
    const std::int64_t remaining = frame.population - frame.sample;
    const std::int64_t extra = std::min(k - frame.observed, remaining);
    return binom_cdf(remaining, delta, extra);
}

AssuranceReport assure(const Prior& prior, const LotFrame& frame,
                       std::optional<std::int64_t> k) {
    frame.validate();

    AssuranceReport report;
    report.frame = frame;
    report.k = k;

    if (prior.kind() == PriorKind::binomial_psp) {
        const double delta = prior.delta();
        report.engine = "conjugate-psp";
        report.p_zero = frame.observed == 0
                            ? p_zero_psp(frame.population, frame.sample, delta)
                            : 0.0;
        if (k) {
            report.p_at_most_k = p_at_most_k_psp(frame, delta, *k);
        }
        return report;
    }

    if (!k && frame.observed == 0 && prior.kind() == PriorKind::uniform) {
        report.engine = "uniform-closed";
        report.p_zero = p_zero_uniform(frame.population, frame.sample);
        return report;
    }
    if (!k && frame.observed == 0 && prior.kind() == PriorKind::bounded_uniform) {
        report.engine = "bounded-uniform-closed";
        report.p_zero = p_zero_bounded_uniform(frame.population, frame.sample,
                                               prior.max_count());
        return report;
    }

    const PosteriorTable table = posterior_general(prior, frame);
    report.engine = table.engine;
    report.p_zero = table.mass[0];
    if (k) {
        report.p_at_most_k = table.at_most(*k);
    }
    return report;
}

} // namespace finpop
