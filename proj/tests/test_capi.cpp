// Exercises the shared-library C surface end to end: handle lifecycles,
// error-code mapping, and numeric agreement with the closed forms.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "finpop.h"

TEST_CASE("version and error reporting") {
    CHECK(std::strlen(finpop_version()) > 0);

    double out = 0.0;
    CHECK(finpop_p_zero_uniform(10, 20, &out) == FINPOP_ERROR_INVALID);
    CHECK(std::strlen(finpop_last_error()) > 0);
    CHECK(finpop_p_zero_uniform(10, 2, &out) == FINPOP_OK);
    CHECK(std::strlen(finpop_last_error()) == 0);
    CHECK(finpop_p_zero_uniform(10, 2, nullptr) == FINPOP_ERROR_INVALID);
}

TEST_CASE("prior construction and mass") {
    finpop_prior* uniform = nullptr;
    REQUIRE(finpop_prior_uniform(&uniform) == FINPOP_OK);
    CHECK(std::string(finpop_prior_kind(uniform)) == "uniform");
    double mass[5];
    REQUIRE(finpop_prior_mass(uniform, 4, mass) == FINPOP_OK);
    for (double m : mass) CHECK(m == 0.2);
    finpop_prior_free(uniform);

    finpop_prior* bounded = nullptr;
    REQUIRE(finpop_prior_bounded_uniform(2, &bounded) == FINPOP_OK);
    REQUIRE(finpop_prior_mass(bounded, 4, mass) == FINPOP_OK);
    CHECK(mass[2] == doctest::Approx(1.0 / 3.0));
    CHECK(mass[3] == 0.0);
    finpop_prior_free(bounded);

    finpop_prior* psp = nullptr;
    REQUIRE(finpop_prior_psp(0.25, &psp) == FINPOP_OK);
    CHECK(std::string(finpop_prior_kind(psp)) == "psp");
    finpop_prior_free(psp);
    CHECK(finpop_prior_psp(1.5, &psp) == FINPOP_ERROR_INVALID);

    const double weights[] = {0.9, 0.1};
    const double ps[] = {0.01, 0.2};
    finpop_prior* mixed = nullptr;
    REQUIRE(finpop_prior_mixed(weights, ps, 2, &mixed) == FINPOP_OK);
    CHECK(std::string(finpop_prior_kind(mixed)) == "mixed");

    finpop_prior* restricted = nullptr;
    REQUIRE(finpop_prior_restrict(mixed, 1, &restricted) == FINPOP_OK);
    CHECK(std::string(finpop_prior_kind(restricted)) == "psp");
    CHECK(finpop_prior_restrict(mixed, 7, &restricted) == FINPOP_ERROR_INVALID);
    finpop_prior_free(restricted);
    finpop_prior_free(mixed);

    const double table[] = {1.0, 3.0};
    finpop_prior* tabulated = nullptr;
    REQUIRE(finpop_prior_tabulated(table, 2, &tabulated) == FINPOP_OK);
    double norm[2];
    REQUIRE(finpop_prior_mass(tabulated, 1, norm) == FINPOP_OK);
    CHECK(norm[1] == 0.75);
    finpop_prior_free(tabulated);

    finpop_prior* parsed = nullptr;
    REQUIRE(finpop_prior_from_json("{\"kind\":\"psp\",\"delta\":0.0005}", &parsed) ==
            FINPOP_OK);
    finpop_prior_free(parsed);
    CHECK(finpop_prior_from_json("{\"kind\":\"nope\"}", &parsed) == FINPOP_ERROR_PARSE);
    CHECK(finpop_prior_from_json("garbage", &parsed) == FINPOP_ERROR_PARSE);
}

TEST_CASE("closed forms") {
    double out = 0.0;
    REQUIRE(finpop_p_zero_uniform(3200, 125, &out) == FINPOP_OK);
    CHECK(out == 126.0 / 3201.0);

    REQUIRE(finpop_p_zero_bounded_uniform(3200, 125, 3200, &out) == FINPOP_OK);
    CHECK(std::abs(out - 126.0 / 3201.0) <= 1e-12);

    REQUIRE(finpop_p_zero_psp(3200, 125, 0.0005, &out) == FINPOP_OK);
    CHECK(std::abs(out - 0.215) <= 5e-4);

    REQUIRE(finpop_p_at_most_k_psp(10000, 200, 1, 0.002, 40, &out) == FINPOP_OK);
    CHECK(out >= 0.999);
    CHECK(out <= 1.0);
}

TEST_CASE("posterior handles") {
    finpop_prior* prior = nullptr;
    REQUIRE(finpop_prior_uniform(&prior) == FINPOP_OK);

    finpop_posterior* posterior = nullptr;
    REQUIRE(finpop_posterior_general(prior, 100, 10, 0, &posterior) == FINPOP_OK);
    CHECK(finpop_posterior_size(posterior) == 101);
    CHECK(std::string(finpop_posterior_engine(posterior)) == "general");
    CHECK(finpop_posterior_mass_at(posterior, 0) ==
          doctest::Approx(11.0 / 101.0).epsilon(1e-11));
    CHECK(finpop_posterior_mass_at(posterior, 500) == 0.0);
    CHECK(finpop_posterior_mass_at(posterior, -1) == 0.0);
    double tail = 0.0;
    REQUIRE(finpop_posterior_at_most(posterior, 100, &tail) == FINPOP_OK);
    CHECK(tail == doctest::Approx(1.0).epsilon(1e-12));
    finpop_posterior_free(posterior);

    finpop_posterior* conjugate = nullptr;
    REQUIRE(finpop_posterior_psp(50, 10, 2, 0.1, &conjugate) == FINPOP_OK);
    CHECK(std::string(finpop_posterior_engine(conjugate)) == "conjugate-psp");
    CHECK(finpop_posterior_mass_at(conjugate, 1) == 0.0);
    finpop_posterior_free(conjugate);

    // incompatible prior/evidence maps to its own status
    finpop_prior* narrow = nullptr;
    REQUIRE(finpop_prior_bounded_uniform(0, &narrow) == FINPOP_OK);
    finpop_posterior* bad = nullptr;
    CHECK(finpop_posterior_general(narrow, 20, 5, 1, &bad) == FINPOP_ERROR_INCOMPATIBLE);
    finpop_prior_free(narrow);
    finpop_prior_free(prior);
}

TEST_CASE("assure") {
    finpop_prior* prior = nullptr;
    REQUIRE(finpop_prior_psp(0.002, &prior) == FINPOP_OK);

    finpop_assurance report{};
    REQUIRE(finpop_assure(prior, 10000, 200, 1, nullptr, &report) == FINPOP_OK);
    CHECK(report.p_zero == 0.0);
    CHECK(report.has_k == 0);
    CHECK(std::string(report.engine) == "conjugate-psp");

    const int64_t k = 40;
    REQUIRE(finpop_assure(prior, 10000, 200, 1, &k, &report) == FINPOP_OK);
    CHECK(report.has_k == 1);
    CHECK(report.k == 40);
    CHECK(report.p_at_most_k >= 0.999);
    finpop_prior_free(prior);
}

TEST_CASE("plan table and plan operations") {
    finpop_plan_table* table = nullptr;
    REQUIRE(finpop_plan_table_load(FINPOP_FIXTURE_PLAN_TABLE, &table) == FINPOP_OK);
    CHECK(finpop_plan_table_size(table) == 2);

    finpop_plan plan{};
    REQUIRE(finpop_plan_table_get(table, 0, &plan) == FINPOP_OK);
    CHECK(plan.sample == 125);
    CHECK(finpop_plan_table_get(table, 9, &plan) == FINPOP_ERROR_INVALID);

    REQUIRE(finpop_plan_table_lookup(table, 3200, 0.001, &plan) == FINPOP_OK);
    CHECK(plan.sample == 125);
    CHECK(plan.acceptance_number == 0);
    CHECK(plan.has_aql == 1);
    CHECK(plan.has_lot_range == 1);
    CHECK(plan.lot_min == 1201);

    CHECK(finpop_plan_table_lookup(table, 50, 0.001, &plan) == FINPOP_ERROR_NO_PLAN);
    finpop_plan_table_free(table);

    CHECK(finpop_plan_table_load("missing.csv", &table) == FINPOP_ERROR_IO);
    CHECK(finpop_plan_table_parse("nonsense", &table) == FINPOP_ERROR_PARSE);

    finpop_plan hand{};
    hand.sample = 125;
    hand.acceptance_number = 0;
    int accept = -1;
    REQUIRE(finpop_decide(&hand, 0, &accept) == FINPOP_OK);
    CHECK(accept == 1);
    REQUIRE(finpop_decide(&hand, 1, &accept) == FINPOP_OK);
    CHECK(accept == 0);
    CHECK(finpop_decide(&hand, 126, &accept) == FINPOP_ERROR_INVALID);

    double delta = 0.0;
    REQUIRE(finpop_elicit_delta(0.001, 0.5, &delta) == FINPOP_OK);
    CHECK(delta == 0.0005);

    int64_t threshold = 0;
    REQUIRE(finpop_quality_threshold(10000, 0.004, &threshold) == FINPOP_OK);
    CHECK(threshold == 40);

    double marginal = 0.0;
    REQUIRE(finpop_marginal_accept_psp(125, 0.0005, &marginal) == FINPOP_OK);
    CHECK(marginal == doctest::Approx(0.9393983797).epsilon(1e-9));

    finpop_prior* psp = nullptr;
    REQUIRE(finpop_prior_psp(0.0005, &psp) == FINPOP_OK);
    double general = 0.0;
    finpop_plan paper_plan{};
    paper_plan.sample = 125;
    paper_plan.acceptance_number = 0;
    REQUIRE(finpop_marginal_accept_general(psp, 3200, &paper_plan, &general) == FINPOP_OK);
    CHECK(std::abs(general - marginal) <= 1e-10);
    finpop_prior_free(psp);

    const int64_t counts[] = {0, 32, 3200};
    double probs[3];
    REQUIRE(finpop_oc_curve(&paper_plan, 3200, counts, 3, probs) == FINPOP_OK);
    CHECK(probs[0] == 1.0);
    CHECK(probs[2] == 0.0);
}

TEST_CASE("simulation and exact conditioning") {
    finpop_prior* prior = nullptr;
    REQUIRE(finpop_prior_uniform(&prior) == FINPOP_OK);
    finpop_plan plan{};
    plan.sample = 4;
    plan.acceptance_number = 0;

    finpop_sim_result* sim = nullptr;
    REQUIRE(finpop_simulate(prior, 10, &plan, 5000, 31337, &sim) == FINPOP_OK);
    CHECK(finpop_sim_total(sim) == 5000);
    const int64_t accepted = finpop_sim_accepted(sim);
    CHECK(accepted > 0);
    std::vector<int64_t> counts(11);
    REQUIRE(finpop_sim_counts(sim, counts.data()) == FINPOP_OK);
    int64_t sum = 0;
    for (int64_t c : counts) sum += c;
    CHECK(sum == accepted);
    CHECK(finpop_sim_component_count(sim) == 0);

    finpop_sim_result* again = nullptr;
    REQUIRE(finpop_simulate(prior, 10, &plan, 5000, 31337, &again) == FINPOP_OK);
    std::vector<int64_t> counts_again(11);
    REQUIRE(finpop_sim_counts(again, counts_again.data()) == FINPOP_OK);
    CHECK(counts == counts_again);
    finpop_sim_free(again);
    finpop_sim_free(sim);

    std::vector<double> mass(11);
    REQUIRE(finpop_enumerate_conditional(prior, 10, &plan, 0, mass.data()) == FINPOP_OK);
    CHECK(mass[0] == doctest::Approx(5.0 / 11.0).epsilon(1e-12));

    CHECK(finpop_enumerate_conditional(prior, 6000, &plan, 0, mass.data()) ==
          FINPOP_ERROR_COST_GUARD);
    finpop_prior_free(prior);
}

TEST_CASE("mixture report") {
    const double weights[] = {0.95, 0.05};
    const double ps[] = {0.0005, 0.05};
    finpop_prior* mixed = nullptr;
    REQUIRE(finpop_prior_mixed(weights, ps, 2, &mixed) == FINPOP_OK);
    finpop_plan plan{};
    plan.sample = 20;
    plan.acceptance_number = 0;

    finpop_mixture_report* report = nullptr;
    REQUIRE(finpop_mixture_report_create(mixed, 0, 200, &plan, &report) == FINPOP_OK);
    CHECK(finpop_mixture_report_psp_count(report) == 1);

    std::vector<double> psp(201), good(201), mixture(201);
    REQUIRE(finpop_mixture_report_psp(report, 0, psp.data()) == FINPOP_OK);
    REQUIRE(finpop_mixture_report_good(report, good.data()) == FINPOP_OK);
    REQUIRE(finpop_mixture_report_mixture(report, mixture.data()) == FINPOP_OK);
    CHECK(finpop_mixture_report_psp(report, 1, psp.data()) == FINPOP_ERROR_INVALID);

    double worst = 0.0;
    for (std::size_t i = 0; i < psp.size(); ++i) {
        worst = std::max(worst, std::abs(psp[i] - good[i]));
    }
    CHECK(worst <= 1e-10);

    double tv_pm = 0.0, tv_pg = 0.0, tv_gm = 0.0;
    REQUIRE(finpop_mixture_report_tv(report, &tv_pm, &tv_pg, &tv_gm) == FINPOP_OK);
    CHECK(tv_pm > 0.0);
    CHECK(tv_pg <= 1e-10);

    finpop_mixture_report_free(report);
    CHECK(finpop_mixture_report_create(mixed, 9, 200, &plan, &report) ==
          FINPOP_ERROR_INVALID);
    finpop_prior_free(mixed);
}
