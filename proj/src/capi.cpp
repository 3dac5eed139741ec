#include "finpop.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finpop/error.hpp"
#include "finpop/inference.hpp"
#include "finpop/plans.hpp"
#include "finpop/prior.hpp"
#include "finpop/simulate.hpp"

struct finpop_prior {
    finpop::Prior value;
};

struct finpop_posterior {
    finpop::PosteriorTable value;
};

struct finpop_plan_table {
    finpop::PlanTable value;
};

struct finpop_sim_result {
    finpop::EmpiricalConditional value;
};

struct finpop_mixture_report {
    finpop::PspMixtureReport value;
};

namespace {

thread_local std::string g_last_error;

finpop_status status_from(finpop::ErrorCode code) {
    switch (code) {
        case finpop::ErrorCode::invalid_argument: return FINPOP_ERROR_INVALID;
        case finpop::ErrorCode::incompatible: return FINPOP_ERROR_INCOMPATIBLE;
        case finpop::ErrorCode::no_plan: return FINPOP_ERROR_NO_PLAN;
        case finpop::ErrorCode::cost_guard: return FINPOP_ERROR_COST_GUARD;
        case finpop::ErrorCode::parse: return FINPOP_ERROR_PARSE;
        case finpop::ErrorCode::io: return FINPOP_ERROR_IO;
    }
    return FINPOP_ERROR_INTERNAL;
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
finpop_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FINPOP_OK;
    } catch (const finpop::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FINPOP_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FINPOP_ERROR_INTERNAL;
    }
}

finpop_status invalid(const char* message) {
    g_last_error = message;
    return FINPOP_ERROR_INVALID;
}

finpop::SamplingPlan to_cpp_plan(const finpop_plan& plan) {
    finpop::SamplingPlan out;
    out.sample = plan.sample;
    out.acceptance_number = plan.acceptance_number;
    if (plan.has_aql) out.aql = plan.aql;
    if (plan.has_lot_range) out.lot_range = {plan.lot_min, plan.lot_max};
    return out;
}

finpop_plan to_c_plan(const finpop::SamplingPlan& plan) {
    finpop_plan out{};
    out.sample = plan.sample;
    out.acceptance_number = plan.acceptance_number;
    out.has_aql = plan.aql.has_value();
    out.aql = plan.aql.value_or(0.0);
    out.has_lot_range = plan.lot_range.has_value();
    if (plan.lot_range) {
        out.lot_min = plan.lot_range->first;
        out.lot_max = plan.lot_range->second;
    }
    return out;
}

} // namespace

extern "C" {

const char* finpop_version(void) { return "1.0.0"; }

const char* finpop_last_error(void) { return g_last_error.c_str(); }

finpop_status finpop_prior_uniform(finpop_prior** out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = new finpop_prior{finpop::Prior::uniform()}; });
}

finpop_status finpop_prior_bounded_uniform(int64_t max_count, finpop_prior** out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] {
        *out = new finpop_prior{finpop::Prior::bounded_uniform(max_count)};
    });
}

finpop_status finpop_prior_psp(double delta, finpop_prior** out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = new finpop_prior{finpop::Prior::binomial_psp(delta)}; });
}

finpop_status finpop_prior_mixed(const double* weights, const double* ps,
                                 size_t n_components, finpop_prior** out) {
    if (out == nullptr || weights == nullptr || ps == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        std::vector<finpop::MixtureComponent> components(n_components);
        for (size_t i = 0; i < n_components; ++i) {
            components[i] = {weights[i], ps[i]};
        }
        *out = new finpop_prior{finpop::Prior::mixed(std::move(components))};
    });
}

finpop_status finpop_prior_tabulated(const double* mass, size_t len, finpop_prior** out) {
    if (out == nullptr || mass == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out = new finpop_prior{finpop::Prior::tabulated({mass, mass + len})};
    });
}

finpop_status finpop_prior_from_json(const char* spec, finpop_prior** out) {
    if (out == nullptr || spec == nullptr) return invalid("NULL argument");
    return guarded([&] { *out = new finpop_prior{finpop::Prior::from_json(spec)}; });
}

finpop_status finpop_prior_restrict(const finpop_prior* mixed, size_t index,
                                    finpop_prior** out) {
    if (out == nullptr || mixed == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out = new finpop_prior{mixed->value.restrict_to_component(index)};
    });
}

const char* finpop_prior_kind(const finpop_prior* prior) {
    return prior == nullptr ? "" : prior->value.kind_name();
}

finpop_status finpop_prior_mass(const finpop_prior* prior, int64_t population,
                                double* out_mass) {
    if (prior == nullptr || out_mass == nullptr) return invalid("NULL argument");
    return guarded([&] {
        const std::vector<double> mass = prior->value.mass(population);
        std::memcpy(out_mass, mass.data(), mass.size() * sizeof(double));
    });
}

void finpop_prior_free(finpop_prior* prior) { delete prior; }

finpop_status finpop_p_zero_uniform(int64_t population, int64_t sample, double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = finpop::p_zero_uniform(population, sample); });
}

finpop_status finpop_p_zero_bounded_uniform(int64_t population, int64_t sample,
                                            int64_t max_count, double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] {
        *out = finpop::p_zero_bounded_uniform(population, sample, max_count);
    });
}

finpop_status finpop_p_zero_psp(int64_t population, int64_t sample, double delta,
                                double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = finpop::p_zero_psp(population, sample, delta); });
}

finpop_status finpop_p_at_most_k_psp(int64_t population, int64_t sample,
                                     int64_t observed, double delta, int64_t k,
                                     double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] {
        *out = finpop::p_at_most_k_psp({population, sample, observed}, delta, k);
    });
}

finpop_status finpop_posterior_general(const finpop_prior* prior, int64_t population,
                                       int64_t sample, int64_t observed,
                                       finpop_posterior** out) {
    if (prior == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out = new finpop_posterior{
            finpop::posterior_general(prior->value, {population, sample, observed})};
    });
}

finpop_status finpop_posterior_psp(int64_t population, int64_t sample, int64_t observed,
                                   double delta, finpop_posterior** out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] {
        *out = new finpop_posterior{
            finpop::posterior_psp({population, sample, observed}, delta)};
    });
}

int64_t finpop_posterior_size(const finpop_posterior* posterior) {
    return posterior == nullptr ? 0 : static_cast<int64_t>(posterior->value.mass.size());
}

double finpop_posterior_mass_at(const finpop_posterior* posterior, int64_t count) {
    if (posterior == nullptr || count < 0 ||
        count >= static_cast<int64_t>(posterior->value.mass.size())) {
        return 0.0;
    }
    return posterior->value.mass[static_cast<size_t>(count)];
}

const char* finpop_posterior_engine(const finpop_posterior* posterior) {
    return posterior == nullptr ? "" : posterior->value.engine.c_str();
}

finpop_status finpop_posterior_at_most(const finpop_posterior* posterior, int64_t k,
                                       double* out) {
    if (posterior == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] { *out = posterior->value.at_most(k); });
}

void finpop_posterior_free(finpop_posterior* posterior) { delete posterior; }

finpop_status finpop_assure(const finpop_prior* prior, int64_t population,
                            int64_t sample, int64_t observed, const int64_t* k_opt,
                            finpop_assurance* out) {
    if (prior == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] {
        std::optional<int64_t> k;
        if (k_opt != nullptr) k = *k_opt;
        const finpop::AssuranceReport report =
            finpop::assure(prior->value, {population, sample, observed}, k);
        *out = finpop_assurance{};
        out->p_zero = report.p_zero;
        out->has_k = report.k.has_value();
        out->k = report.k.value_or(0);
        out->p_at_most_k = report.p_at_most_k.value_or(0.0);
        std::snprintf(out->engine, sizeof(out->engine), "%s", report.engine.c_str());
    });
}

finpop_status finpop_plan_table_load(const char* path, finpop_plan_table** out) {
    if (path == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out = new finpop_plan_table{finpop::PlanTable::load(path)};
    });
}

finpop_status finpop_plan_table_parse(const char* text, finpop_plan_table** out) {
    if (text == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out = new finpop_plan_table{finpop::PlanTable::parse(text)};
    });
}

size_t finpop_plan_table_size(const finpop_plan_table* table) {
    return table == nullptr ? 0 : table->value.plans().size();
}

finpop_status finpop_plan_table_get(const finpop_plan_table* table, size_t index,
                                    finpop_plan* out) {
    if (table == nullptr || out == nullptr) return invalid("NULL argument");
    if (index >= table->value.plans().size()) return invalid("plan index out of range");
    *out = to_c_plan(table->value.plans()[index]);
    g_last_error.clear();
    return FINPOP_OK;
}

finpop_status finpop_plan_table_lookup(const finpop_plan_table* table, int64_t lot_size,
                                       double aql, finpop_plan* out) {
    if (table == nullptr || out == nullptr) return invalid("NULL argument");
    return guarded([&] { *out = to_c_plan(table->value.lookup(lot_size, aql)); });
}

void finpop_plan_table_free(finpop_plan_table* table) { delete table; }

finpop_status finpop_decide(const finpop_plan* plan, int64_t observed, int* out_accept) {
    if (plan == nullptr || out_accept == nullptr) return invalid("NULL argument");
    return guarded([&] {
        *out_accept = finpop::decide(to_cpp_plan(*plan), observed).accepted ? 1 : 0;
    });
}

finpop_status finpop_elicit_delta(double aql, double factor, double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = finpop::elicit_delta(aql, factor); });
}

finpop_status finpop_quality_threshold(int64_t population, double aql, int64_t* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = finpop::quality_threshold_k(population, aql); });
}

finpop_status finpop_marginal_accept_psp(int64_t sample, double delta, double* out) {
    if (out == nullptr) return invalid("out pointer is NULL");
    return guarded([&] { *out = finpop::marginal_accept_psp(sample, delta); });
}

finpop_status finpop_marginal_accept_general(const finpop_prior* prior,
                                             int64_t population, const finpop_plan* plan,
                                             double* out) {
    if (prior == nullptr || plan == nullptr || out == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        *out = finpop::marginal_accept_general(prior->value, population,
                                               to_cpp_plan(*plan));
    });
}

finpop_status finpop_oc_curve(const finpop_plan* plan, int64_t population,
                              const int64_t* marked_counts, size_t len,
                              double* out_probs) {
    if (plan == nullptr || marked_counts == nullptr || out_probs == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        const auto points = finpop::oc_curve(to_cpp_plan(*plan), population,
                                             {marked_counts, len});
        for (size_t i = 0; i < points.size(); ++i) {
            out_probs[i] = points[i].accept_prob;
        }
    });
}

finpop_status finpop_simulate(const finpop_prior* prior, int64_t population,
                              const finpop_plan* plan, int64_t trials, uint64_t seed,
                              finpop_sim_result** out) {
    if (prior == nullptr || plan == nullptr || out == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        finpop::SimConfig config{trials, seed, prior->value, population,
                                 to_cpp_plan(*plan)};
        *out = new finpop_sim_result{finpop::simulate_conditional(config)};
    });
}

int64_t finpop_sim_total(const finpop_sim_result* sim) {
    return sim == nullptr ? 0 : sim->value.total;
}

int64_t finpop_sim_accepted(const finpop_sim_result* sim) {
    return sim == nullptr ? 0 : sim->value.accepted;
}

finpop_status finpop_sim_counts(const finpop_sim_result* sim, int64_t* out) {
    if (sim == nullptr || out == nullptr) return invalid("NULL argument");
    std::memcpy(out, sim->value.counts.data(),
                sim->value.counts.size() * sizeof(int64_t));
    g_last_error.clear();
    return FINPOP_OK;
}

size_t finpop_sim_component_count(const finpop_sim_result* sim) {
    return sim == nullptr ? 0 : sim->value.component_counts.size();
}

finpop_status finpop_sim_component_counts(const finpop_sim_result* sim, size_t component,
                                          int64_t* out) {
    if (sim == nullptr || out == nullptr) return invalid("NULL argument");
    if (component >= sim->value.component_counts.size()) {
        return invalid("component index out of range");
    }
    const auto& counts = sim->value.component_counts[component];
    std::memcpy(out, counts.data(), counts.size() * sizeof(int64_t));
    g_last_error.clear();
    return FINPOP_OK;
}

void finpop_sim_free(finpop_sim_result* sim) { delete sim; }

finpop_status finpop_enumerate_conditional(const finpop_prior* prior, int64_t population,
                                           const finpop_plan* plan,
                                           int64_t population_limit, double* out_mass) {
    if (prior == nullptr || plan == nullptr || out_mass == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        const std::vector<double> mass = finpop::enumerate_conditional(
            prior->value, population, to_cpp_plan(*plan), population_limit);
        std::memcpy(out_mass, mass.data(), mass.size() * sizeof(double));
    });
}

finpop_status finpop_mixture_report_create(const finpop_prior* mixed, size_t good_index,
                                           int64_t population, const finpop_plan* plan,
                                           finpop_mixture_report** out) {
    if (mixed == nullptr || plan == nullptr || out == nullptr) {
        return invalid("NULL argument");
    }
    return guarded([&] {
        *out = new finpop_mixture_report{finpop::psp_vs_mixture_report(
            mixed->value, good_index, population, to_cpp_plan(*plan))};
    });
}

size_t finpop_mixture_report_psp_count(const finpop_mixture_report* report) {
    return report == nullptr ? 0 : report->value.psp_posteriors.size();
}

finpop_status finpop_mixture_report_psp(const finpop_mixture_report* report,
                                        size_t observed, double* out) {
    if (report == nullptr || out == nullptr) return invalid("NULL argument");
    if (observed >= report->value.psp_posteriors.size()) {
        return invalid("observed count outside the acceptance region");
    }
    const auto& mass = report->value.psp_posteriors[observed];
    std::memcpy(out, mass.data(), mass.size() * sizeof(double));
    g_last_error.clear();
    return FINPOP_OK;
}

finpop_status finpop_mixture_report_mixture(const finpop_mixture_report* report,
                                            double* out) {
    if (report == nullptr || out == nullptr) return invalid("NULL argument");
    const auto& mass = report->value.mixture_conditional;
    std::memcpy(out, mass.data(), mass.size() * sizeof(double));
    g_last_error.clear();
    return FINPOP_OK;
}

finpop_status finpop_mixture_report_good(const finpop_mixture_report* report,
                                         double* out) {
    if (report == nullptr || out == nullptr) return invalid("NULL argument");
    const auto& mass = report->value.good_component_conditional;
    std::memcpy(out, mass.data(), mass.size() * sizeof(double));
    g_last_error.clear();
    return FINPOP_OK;
}

finpop_status finpop_mixture_report_tv(const finpop_mixture_report* report,
                                       double* tv_psp_vs_mixture, double* tv_psp_vs_good,
                                       double* tv_good_vs_mixture) {
    if (report == nullptr) return invalid("NULL argument");
    if (tv_psp_vs_mixture != nullptr) *tv_psp_vs_mixture = report->value.tv_psp_vs_mixture;
    if (tv_psp_vs_good != nullptr) *tv_psp_vs_good = report->value.tv_psp_vs_good;
    if (tv_good_vs_mixture != nullptr) *tv_good_vs_mixture = report->value.tv_good_vs_mixture;
    g_last_error.clear();
    return FINPOP_OK;
}

void finpop_mixture_report_free(finpop_mixture_report* report) { delete report; }

} // extern "C"
