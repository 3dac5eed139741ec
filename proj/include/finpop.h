/*
 * finpop — exact Bayesian assurance for attribute sampling of finite lots.
 *
 * C API of the shared library. All functions return FINPOP_OK on success and
 * an error code otherwise; finpop_last_error() describes the most recent
 * failure on the calling thread. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_free function.
 */

#ifndef FINPOP_H
#define FINPOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FINPOP_API __declspec(dllexport)
#else
#define FINPOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum finpop_status {
    FINPOP_OK = 0,
    FINPOP_ERROR_INVALID = 1,      /* domain or validation violation */
    FINPOP_ERROR_INCOMPATIBLE = 2, /* prior support disjoint from the evidence */
    FINPOP_ERROR_NO_PLAN = 3,      /* plan lookup found no matching row */
    FINPOP_ERROR_COST_GUARD = 4,   /* exact enumeration above the size limit */
    FINPOP_ERROR_PARSE = 5,        /* malformed prior spec or plan table */
    FINPOP_ERROR_IO = 6,           /* file not readable */
    FINPOP_ERROR_INTERNAL = 7
} finpop_status;

typedef struct finpop_prior finpop_prior;
typedef struct finpop_posterior finpop_posterior;
typedef struct finpop_plan_table finpop_plan_table;
typedef struct finpop_sim_result finpop_sim_result;
typedef struct finpop_mixture_report finpop_mixture_report;

FINPOP_API const char* finpop_version(void);

/* Message for the last failing call on this thread; empty string if none. */
FINPOP_API const char* finpop_last_error(void);

/* ---- priors ---------------------------------------------------------- */

FINPOP_API finpop_status finpop_prior_uniform(finpop_prior** out);
FINPOP_API finpop_status finpop_prior_bounded_uniform(int64_t max_count,
                                                      finpop_prior** out);
FINPOP_API finpop_status finpop_prior_psp(double delta, finpop_prior** out);
FINPOP_API finpop_status finpop_prior_mixed(const double* weights, const double* ps,
                                            size_t n_components, finpop_prior** out);
FINPOP_API finpop_status finpop_prior_tabulated(const double* mass, size_t len,
                                                finpop_prior** out);

/* JSON spec, e.g. {"kind":"psp","delta":0.0005} or
 * {"kind":"mixed","components":[{"weight":0.95,"p":0.0005},...]}. */
FINPOP_API finpop_status finpop_prior_from_json(const char* spec, finpop_prior** out);

/* The single mixture component at `index`, as a psp prior. */
FINPOP_API finpop_status finpop_prior_restrict(const finpop_prior* mixed, size_t index,
                                               finpop_prior** out);

FINPOP_API const char* finpop_prior_kind(const finpop_prior* prior);

/* Writes population+1 masses into out_mass. */
FINPOP_API finpop_status finpop_prior_mass(const finpop_prior* prior, int64_t population,
                                           double* out_mass);

FINPOP_API void finpop_prior_free(finpop_prior* prior);

/* ---- closed-form assurance probabilities ----------------------------- */

FINPOP_API finpop_status finpop_p_zero_uniform(int64_t population, int64_t sample,
                                               double* out);
FINPOP_API finpop_status finpop_p_zero_bounded_uniform(int64_t population, int64_t sample,
                                                       int64_t max_count, double* out);
FINPOP_API finpop_status finpop_p_zero_psp(int64_t population, int64_t sample,
                                           double delta, double* out);
FINPOP_API finpop_status finpop_p_at_most_k_psp(int64_t population, int64_t sample,
                                                int64_t observed, double delta,
                                                int64_t k, double* out);

/* ---- posterior tables ------------------------------------------------ */

FINPOP_API finpop_status finpop_posterior_general(const finpop_prior* prior,
                                                  int64_t population, int64_t sample,
                                                  int64_t observed,
                                                  finpop_posterior** out);
FINPOP_API finpop_status finpop_posterior_psp(int64_t population, int64_t sample,
                                              int64_t observed, double delta,
                                              finpop_posterior** out);

/* Number of table entries (population + 1); 0 for NULL. */
FINPOP_API int64_t finpop_posterior_size(const finpop_posterior* posterior);
FINPOP_API double finpop_posterior_mass_at(const finpop_posterior* posterior,
                                           int64_t count);
FINPOP_API const char* finpop_posterior_engine(const finpop_posterior* posterior);
/* Pr{count <= k}. */
FINPOP_API finpop_status finpop_posterior_at_most(const finpop_posterior* posterior,
                                                  int64_t k, double* out);
FINPOP_API void finpop_posterior_free(finpop_posterior* posterior);

/* ---- assurance summary ----------------------------------------------- */

typedef struct finpop_assurance {
    double p_zero;
    double p_at_most_k; /* meaningful only when has_k != 0 */
    int64_t k;
    int has_k;
    char engine[32];
} finpop_assurance;

/* k_opt may be NULL when no tail probability is requested. */
FINPOP_API finpop_status finpop_assure(const finpop_prior* prior, int64_t population,
                                       int64_t sample, int64_t observed,
                                       const int64_t* k_opt, finpop_assurance* out);

/* ---- sampling plans --------------------------------------------------- */

typedef struct finpop_plan {
    int64_t sample;
    int64_t acceptance_number;
    double aql; /* meaningful only when has_aql != 0 */
    int has_aql;
    int64_t lot_min; /* meaningful only when has_lot_range != 0 */
    int64_t lot_max;
    int has_lot_range;
} finpop_plan;

FINPOP_API finpop_status finpop_plan_table_load(const char* path,
                                                finpop_plan_table** out);
FINPOP_API finpop_status finpop_plan_table_parse(const char* text,
                                                 finpop_plan_table** out);
FINPOP_API size_t finpop_plan_table_size(const finpop_plan_table* table);
FINPOP_API finpop_status finpop_plan_table_get(const finpop_plan_table* table,
                                               size_t index, finpop_plan* out);
FINPOP_API finpop_status finpop_plan_table_lookup(const finpop_plan_table* table,
                                                  int64_t lot_size, double aql,
                                                  finpop_plan* out);
FINPOP_API void finpop_plan_table_free(finpop_plan_table* table);

/* *out_accept is 1 for accept, 0 for reject. */
FINPOP_API finpop_status finpop_decide(const finpop_plan* plan, int64_t observed,
                                       int* out_accept);
FINPOP_API finpop_status finpop_elicit_delta(double aql, double factor, double* out);
FINPOP_API finpop_status finpop_quality_threshold(int64_t population, double aql,
                                                  int64_t* out);
FINPOP_API finpop_status finpop_marginal_accept_psp(int64_t sample, double delta,
                                                    double* out);
FINPOP_API finpop_status finpop_marginal_accept_general(const finpop_prior* prior,
                                                        int64_t population,
                                                        const finpop_plan* plan,
                                                        double* out);
/* Acceptance probability per marked count; out_probs has len entries. */
FINPOP_API finpop_status finpop_oc_curve(const finpop_plan* plan, int64_t population,
                                         const int64_t* marked_counts, size_t len,
                                         double* out_probs);

/* ---- simulation and exact conditioning -------------------------------- */

FINPOP_API finpop_status finpop_simulate(const finpop_prior* prior, int64_t population,
                                         const finpop_plan* plan, int64_t trials,
                                         uint64_t seed, finpop_sim_result** out);
FINPOP_API int64_t finpop_sim_total(const finpop_sim_result* sim);
FINPOP_API int64_t finpop_sim_accepted(const finpop_sim_result* sim);
/* Writes population+1 occurrence counts. */
FINPOP_API finpop_status finpop_sim_counts(const finpop_sim_result* sim, int64_t* out);
FINPOP_API size_t finpop_sim_component_count(const finpop_sim_result* sim);
FINPOP_API finpop_status finpop_sim_component_counts(const finpop_sim_result* sim,
                                                     size_t component, int64_t* out);
FINPOP_API void finpop_sim_free(finpop_sim_result* sim);

/* Exact P(marked count | lot accepted); population_limit <= 0 selects the
 * built-in default guard. Writes population+1 probabilities. */
FINPOP_API finpop_status finpop_enumerate_conditional(const finpop_prior* prior,
                                                      int64_t population,
                                                      const finpop_plan* plan,
                                                      int64_t population_limit,
                                                      double* out_mass);

/* ---- psp vs mixture comparison ---------------------------------------- */

FINPOP_API finpop_status finpop_mixture_report_create(const finpop_prior* mixed,
                                                      size_t good_index,
                                                      int64_t population,
                                                      const finpop_plan* plan,
                                                      finpop_mixture_report** out);
/* Number of psp posteriors carried (acceptance_number + 1). */
FINPOP_API size_t finpop_mixture_report_psp_count(const finpop_mixture_report* report);
/* Each writes population+1 probabilities. */
FINPOP_API finpop_status finpop_mixture_report_psp(const finpop_mixture_report* report,
                                                   size_t observed, double* out);
FINPOP_API finpop_status finpop_mixture_report_mixture(const finpop_mixture_report* report,
                                                       double* out);
FINPOP_API finpop_status finpop_mixture_report_good(const finpop_mixture_report* report,
                                                    double* out);
FINPOP_API finpop_status finpop_mixture_report_tv(const finpop_mixture_report* report,
                                                  double* tv_psp_vs_mixture,
                                                  double* tv_psp_vs_good,
                                                  double* tv_good_vs_mixture);
FINPOP_API void finpop_mixture_report_free(finpop_mixture_report* report);

#ifdef __cplusplus
}
#endif

#endif /* FINPOP_H */
