#include "finpop/logmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "finpop/error.hpp"

namespace finpop {

double log_choose(std::int64_t n, std::int64_t k) {
    if (n < 0) {
        raise(ErrorCode::invalid_argument,
              "log_choose: n must be nonnegative, got " + std::to_string(n));
    }
    if (k < 0 || k > n) {
        return kNegInf;
    }
    if (k == 0 || k == n) {
        return 0.0;
    }
    // lgamma sum grouped so that k and n-k commute; keeps the symmetry
    // log_choose(n, k) == log_choose(n, n-k) bit-exact.
    const double a = std::lgamma(static_cast<double>(k) + 1.0);
    const double b = std::lgamma(static_cast<double>(n - k) + 1.0);
    return std::lgamma(static_cast<double>(n) + 1.0) - (a + b);
}

double log_sum_exp(std::span<const double> terms) {
    if (terms.empty()) {
        return kNegInf;
    }
    const double peak = *std::max_element(terms.begin(), terms.end());
    if (peak == kNegInf) {
        return kNegInf;
    }
    double sum = 0.0;
    for (double t : terms) {
        sum += std::exp(t - peak);
    }
    return peak + std::log(sum);
}

namespace {

void check_frame(std::int64_t population, std::int64_t sample, const char* where) {
    if (population < 0 || sample < 0 || sample > population) {
        raise(ErrorCode::invalid_argument,
              std::string(where) + ": need 0 <= sample <= population, got population=" +
                  std::to_string(population) + " sample=" + std::to_string(sample));
    }
}

} // namespace

double hypergeom_zero_prob(std::int64_t population, std::int64_t marked,
                           std::int64_t sample) {
    check_frame(population, sample, "hypergeom_zero_prob");
    if (marked < 0 || marked > population) {
        raise(ErrorCode::invalid_argument,
              "hypergeom_zero_prob: need 0 <= marked <= population, got marked=" +
                  std::to_string(marked));
    }
    if (marked > population - sample) {
        return 0.0;
    }
    return std::exp(log_choose(population - marked, sample) -
                    log_choose(population, sample));
}

double hypergeom_pmf(std::int64_t population, std::int64_t marked,
                     std::int64_t sample, std::int64_t observed) {
    check_frame(population, sample, "hypergeom_pmf");
    if (marked < 0 || marked > population || observed < 0) {
        raise(ErrorCode::invalid_argument,
              "hypergeom_pmf: counts must be nonnegative and marked <= population");
    }
    // log_choose returns -inf outside the support, which exponentiates to 0.
    const double lp = log_choose(marked, observed) +
                      log_choose(population - marked, sample - observed) -
                      log_choose(population, sample);
    return std::exp(lp);
}

namespace {

void check_binom(std::int64_t trials, double p, std::int64_t count, const char* where) {
    if (trials < 0 || count < 0 || count > trials) {
        raise(ErrorCode::invalid_argument,
              std::string(where) + ": need 0 <= count <= trials, got trials=" +
                  std::to_string(trials) + " count=" + std::to_string(count));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        raise(ErrorCode::invalid_argument,
              std::string(where) + ": p must lie in [0, 1]");
    }
}

// Callers have validated the domain; support handled here.
double log_binom_pmf_unchecked(std::int64_t trials, double p, std::int64_t count) {
    if (p == 0.0) {
        return count == 0 ? 0.0 : kNegInf;
    }
    if (p == 1.0) {
        return count == trials ? 0.0 : kNegInf;
    }
    return log_choose(trials, count) +
           static_cast<double>(count) * std::log(p) +
           static_cast<double>(trials - count) * std::log1p(-p);
}

} // namespace

double binom_pmf(std::int64_t trials, double p, std::int64_t count) {
    check_binom(trials, p, count, "binom_pmf");
    return std::exp(log_binom_pmf_unchecked(trials, p, count));
}

double log_binom_pmf(std::int64_t trials, double p, std::int64_t count) {
    check_binom(trials, p, count, "log_binom_pmf");
    return log_binom_pmf_unchecked(trials, p, count);
}

double binom_cdf(std::int64_t trials, double p, std::int64_t count) {
    check_binom(trials, p, count, "binom_cdf");
    if (count == trials) {
        return 1.0;
    }
    if (p == 0.0) {
        return 1.0;
    }
    if (p == 1.0) {
        return 0.0;
    }
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t j = 0; j <= count; ++j) {
        terms.push_back(std::exp(log_binom_pmf_unchecked(trials, p, j)));
    }
    // Smallest-first accumulation keeps the long tail from being swallowed.
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) {
        sum += t;
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace finpop
