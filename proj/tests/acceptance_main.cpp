// Acceptance suite. Runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion; the exit code is the number of failures.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "finpop/inference.hpp"
#include "finpop/logmath.hpp"
#include "finpop/plans.hpp"
#include "finpop/prior.hpp"
#include "finpop/simulate.hpp"
#include "oracle_bigint.hpp"

using namespace finpop;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    if (!ok) ++g_failures;
}

// 1. Uniform-prior figure: exact closed fraction, 6 d.p., and the
//    conventional 3-significant-digit value.
void criterion_1() {
    const double got = p_zero_uniform(3200, 125);
    const bool exact = got == 126.0 / 3201.0;
    const bool six_dp = std::abs(got - 0.039363) <= 5e-7;
    const bool paper = std::abs(got - 0.0394) <= 5e-5;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "p_zero_uniform(3200,125) = %.9f", got);
    report(1, "uniform-prior figure", exact && six_dp && paper, detail);
}

// 2. PSP figure: within +-0.0005 of the conventional 0.215.
void criterion_2() {
    const double got = p_zero_psp(3200, 125, 0.0005);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "p_zero_psp = %.6f (target 0.215 +- 0.0005)", got);
    report(2, "psp figure", std::abs(got - 0.215) <= 0.0005, detail);
}

// 3. Non-zero acceptance figure: the stated window [0.9985, 0.9995] AND
//    1e-10 relative agreement with the exact Binomial(9800, 1/500) CDF at 39.
void criterion_3() {
    const double got = p_at_most_k_psp({10000, 200, 1}, 0.002, 40);
    const double oracle = finpop_oracle::big_binom_cdf(9800, 1, 500, 39);
    const bool in_window = got >= 0.9985 && got <= 0.9995;
    const bool matches_oracle = std::abs(got - oracle) / oracle <= 1e-10;
    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "value = %.12f, exact = %.12f, window [0.9985,0.9995] %s, oracle %s",
                  got, oracle, in_window ? "ok" : "MISSED",
                  matches_oracle ? "ok" : "MISSED");
    report(3, "non-zero acceptance figure", in_window && matches_oracle, detail);
}

// 4. Marginal acceptance identity for 50 randomized (N, n, delta) triples.
void criterion_4() {
    std::mt19937_64 gen(40404u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double forced[] = {0.0, 0.0005, 0.01, 0.2, 1.0};
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::int64_t population = 1 + static_cast<std::int64_t>(gen() % 1000);
        const std::int64_t sample = 1 + static_cast<std::int64_t>(gen() % population);
        const double delta = rep < 5 ? forced[rep] : unit(gen);
        const SamplingPlan plan{sample, 0, {}, {}};
        const double summed =
            marginal_accept_general(Prior::binomial_psp(delta), population, plan);
        const double closed = marginal_accept_psp(sample, delta);
        worst = std::max(worst, std::abs(summed - closed));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max |summed - (1-d)^n| = %.3e over 50 triples",
                  worst);
    report(4, "marginal acceptance identity", worst <= 1e-10, detail);
}

// 5. Conjugacy: general engine vs conjugate engine for 100 randomized tuples.
void criterion_5() {
    std::mt19937_64 gen(50505u);
    const double deltas[] = {0.0005, 0.01, 0.1, 0.5};
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::int64_t population = 1 + static_cast<std::int64_t>(gen() % 2000);
        const std::int64_t sample = static_cast<std::int64_t>(gen() % (population + 1));
        const std::int64_t observed =
            sample == 0 ? 0 : static_cast<std::int64_t>(gen() % (sample + 1));
        const double delta = deltas[rep % 4];
        const LotFrame frame{population, sample, observed};
        const auto general = posterior_general(Prior::binomial_psp(delta), frame);
        const auto conjugate = posterior_psp(frame, delta);
        for (std::size_t i = 0; i < general.mass.size(); ++i) {
            if (conjugate.mass[i] > 1e-300) {
                worst = std::max(worst, std::abs(general.mass[i] - conjugate.mass[i]) /
                                            conjugate.mass[i]);
            }
        }
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max relative gap = %.3e over 100 tuples", worst);
    report(5, "conjugacy suite", worst <= 1e-9, detail);
}

// 6. Bounded-uniform closed form: M = N reduction and general-engine match.
void criterion_6() {
    std::mt19937_64 gen(60606u);
    double worst_reduction = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::int64_t population = 1 + static_cast<std::int64_t>(gen() % 5000);
        const std::int64_t sample = static_cast<std::int64_t>(gen() % (population + 1));
        const double closed = p_zero_bounded_uniform(population, sample, population);
        const double uniform = p_zero_uniform(population, sample);
        worst_reduction = std::max(worst_reduction, std::abs(closed - uniform));
    }

    double worst_general = 0.0;
    for (const std::int64_t population :
         {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 500}) {
        for (std::int64_t max_count = 0; max_count <= population; ++max_count) {
            const std::int64_t sample = static_cast<std::int64_t>(gen() % (population + 1));
            const double closed = p_zero_bounded_uniform(population, sample, max_count);
            const auto table =
                posterior_general(Prior::bounded_uniform(max_count), {population, sample, 0});
            worst_general = std::max(worst_general, std::abs(closed - table.mass[0]));
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max |reduction gap| = %.3e, max |general gap| = %.3e", worst_reduction,
                  worst_general);
    report(6, "bounded-uniform reductions", worst_reduction <= 1e-12 && worst_general <= 1e-10,
           detail);
}

// 7. Oracle equivalence: exact conditioning at Ac = 0 equals the posterior
//    for every prior family and every N <= 60.
void criterion_7() {
    double worst = 0.0;
    for (std::int64_t population = 1; population <= 60; ++population) {
        std::vector<Prior> priors;
        priors.push_back(Prior::uniform());
        priors.push_back(Prior::bounded_uniform(0));
        priors.push_back(Prior::bounded_uniform(population / 2));
        priors.push_back(Prior::bounded_uniform(population));
        priors.push_back(Prior::binomial_psp(0.1));
        priors.push_back(Prior::binomial_psp(0.7));
        priors.push_back(Prior::mixed({{0.7, 0.05}, {0.3, 0.4}}));
        std::vector<double> table(static_cast<std::size_t>(population) + 1);
        for (std::size_t i = 0; i < table.size(); ++i) {
            table[i] = static_cast<double>(i % 3 + 1);
        }
        priors.push_back(Prior::tabulated(table));

        for (std::int64_t sample = 1; sample <= population; ++sample) {
            const SamplingPlan plan{sample, 0, {}, {}};
            const LotFrame frame{population, sample, 0};
            for (const auto& prior : priors) {
                const auto conditional = enumerate_conditional(prior, population, plan);
                const auto posterior = posterior_general(prior, frame);
                for (std::size_t i = 0; i < conditional.size(); ++i) {
                    worst = std::max(worst, std::abs(conditional[i] - posterior.mass[i]));
                }
            }
        }
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "max pointwise gap = %.3e over all N <= 60 and 8 priors", worst);
    report(7, "oracle equivalence", worst <= 1e-11, detail);
}

// 8. Monte Carlo reproduction of the first plan's figures with 10^6 trials.
void criterion_8() {
    SimConfig config{1000000, 42, Prior::binomial_psp(0.0005), 3200,
                     SamplingPlan{125, 0, {}, {}}};
    const auto sim = simulate_conditional(config);

    const double rate =
        static_cast<double>(sim.accepted) / static_cast<double>(sim.total);
    const double rate_se =
        std::sqrt(0.93939 * (1.0 - 0.93939) / static_cast<double>(sim.total));
    const bool rate_ok = std::abs(rate - 0.93939) <= 3.5 * rate_se;

    const double conditional_zero =
        static_cast<double>(sim.counts[0]) / static_cast<double>(sim.accepted);
    const double zero_se =
        std::sqrt(0.21490 * (1.0 - 0.21490) / static_cast<double>(sim.accepted));
    const bool zero_ok = std::abs(conditional_zero - 0.21490) <= 3.5 * zero_se;

    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "rate = %.5f (target 0.93939 +- %.5f), P(0|acc) = %.5f (target 0.21490 "
                  "+- %.5f)",
                  rate, 3.5 * rate_se, conditional_zero, 3.5 * zero_se);
    report(8, "monte carlo reproduction", rate_ok && zero_ok, detail);
}

// 9. PSP vs mixture at desk scale: conditioning on the good component
//    recovers the psp posterior; the full mixture conditional does not.
void criterion_9() {
    const Prior mixed = Prior::mixed({{0.95, 0.0005}, {0.05, 0.05}});
    const auto rep = psp_vs_mixture_report(mixed, 0, 200, {20, 0, {}, {}});
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.good_component_conditional.size(); ++i) {
        worst = std::max(worst, std::abs(rep.good_component_conditional[i] -
                                         rep.psp_posteriors[0][i]));
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max |good - psp| = %.3e, TV(psp, mixture) = %.5f", worst,
                  rep.tv_psp_vs_mixture);
    report(9, "psp-vs-mixture demonstration", worst <= 1e-10 && rep.tv_psp_vs_mixture > 0.0,
           detail);
}

// 10. High assurance under the uniform prior needs a near-census sample.
void criterion_10() {
    bool ok = true;
    std::string detail;
    for (const std::int64_t population : {100, 1000, 3200}) {
        std::int64_t smallest = -1;
        for (std::int64_t sample = 0; sample <= population; ++sample) {
            if (p_zero_uniform(population, sample) >= 0.99) {
                smallest = sample;
                break;
            }
        }
        const double fraction =
            static_cast<double>(smallest) / static_cast<double>(population);
        ok = ok && smallest >= 0 && fraction >= 0.99;
        detail += "N=" + std::to_string(population) + ": n=" + std::to_string(smallest) +
                  " (" + std::to_string(fraction) + ")  ";
    }
    report(10, "sampling-fraction remark", ok, detail);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
