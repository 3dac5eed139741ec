// finpop command-line interface. Talks to the library exclusively through
// the C API in finpop.h; JSON/CSV rendering and flag handling live here.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "finpop.h"

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1.0.0";

// Exit codes: 0 success, 2 validation, 3 no-plan, 4 cost-guard.
int exit_code_for(finpop_status status) {
    switch (status) {
        case FINPOP_ERROR_NO_PLAN: return 3;
        case FINPOP_ERROR_COST_GUARD: return 4;
        default: return 2;
    }
}

[[noreturn]] void fail(finpop_status status) {
    std::cerr << "finpop: " << finpop_last_error() << "\n";
    std::exit(exit_code_for(status));
}

[[noreturn]] void fail_usage(const std::string& message) {
    std::cerr << "finpop: " << message << "\n";
    std::exit(2);
}

void check(finpop_status status) {
    if (status != FINPOP_OK) fail(status);
}

// Round to 12 significant digits so emitted payloads are stable and don't
// imply more precision than the engines carry.
double round_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Prior specs are inline JSON or @file indirection.
std::string resolve_spec(const std::string& spec) {
    if (spec.empty() || spec[0] != '@') return spec;
    const std::string path = spec.substr(1);
    std::ifstream in(path);
    if (!in) fail_usage("cannot read prior spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct PriorHandle {
    finpop_prior* ptr = nullptr;
    json spec_echo;

    ~PriorHandle() { finpop_prior_free(ptr); }
    PriorHandle() = default;
    PriorHandle(const PriorHandle&) = delete;
    PriorHandle& operator=(const PriorHandle&) = delete;
    PriorHandle(PriorHandle&& o) noexcept : ptr(o.ptr), spec_echo(std::move(o.spec_echo)) {
        o.ptr = nullptr;
    }
};

PriorHandle make_prior(const std::string& raw_spec) {
    PriorHandle handle;
    const std::string spec = resolve_spec(raw_spec);
    check(finpop_prior_from_json(spec.c_str(), &handle.ptr));
    handle.spec_echo = json::parse(spec, nullptr, false);
    if (handle.spec_echo.is_discarded()) handle.spec_echo = spec;
    return handle;
}

json envelope(const std::string& command, json inputs, json result,
              const std::vector<std::string>& warnings) {
    json env;
    env["schema_version"] = kSchemaVersion;
    env["command"] = command;
    env["inputs"] = std::move(inputs);
    env["result"] = std::move(result);
    env["warnings"] = warnings;
    return env;
}

void emit_json(const json& env) { std::cout << env.dump(2) << "\n"; }

// ---- assure ------------------------------------------------------------

struct FrameFlags {
    std::int64_t population = 0;
    std::int64_t sample = 0;
    std::int64_t observed = 0;
};

void add_frame_flags(CLI::App* cmd, FrameFlags& frame) {
    cmd->add_option("--population", frame.population, "lot size N")->required();
    cmd->add_option("--sample", frame.sample, "sample size n")->required();
    cmd->add_option("--observed", frame.observed, "observed attribute count a")->required();
}

int run_assure(const FrameFlags& frame, const std::string& prior_spec,
               std::optional<std::int64_t> k, const std::string& format) {
    PriorHandle prior = make_prior(prior_spec);
    finpop_assurance report{};
    const std::int64_t k_value = k.value_or(0);
    check(finpop_assure(prior.ptr, frame.population, frame.sample, frame.observed,
                        k ? &k_value : nullptr, &report));

    if (format == "csv") {
        std::cout << "p_zero,p_at_most_k,k,engine\n";
        std::cout << format_sig(report.p_zero) << ",";
        if (report.has_k) std::cout << format_sig(report.p_at_most_k);
        std::cout << ",";
        if (report.has_k) std::cout << report.k;
        std::cout << "," << report.engine << "\n";
        return 0;
    }

    json inputs{{"population", frame.population},
                {"sample", frame.sample},
                {"observed", frame.observed},
                {"prior", prior.spec_echo}};
    if (k) inputs["k"] = *k;
    json result{{"p_zero", round_sig(report.p_zero)}, {"engine", report.engine}};
    if (report.has_k) {
        result["p_at_most_k"] = round_sig(report.p_at_most_k);
        result["k"] = report.k;
    }
    emit_json(envelope("assure", std::move(inputs), std::move(result), {}));
    return 0;
}

// ---- posterior -----------------------------------------------------------

int run_posterior(const FrameFlags& frame, const std::string& prior_spec,
                  double tail_trim, const std::string& format) {
    PriorHandle prior = make_prior(prior_spec);
    finpop_posterior* posterior = nullptr;
    check(finpop_posterior_general(prior.ptr, frame.population, frame.sample,
                                   frame.observed, &posterior));
    std::unique_ptr<finpop_posterior, decltype(&finpop_posterior_free)> guard(
        posterior, &finpop_posterior_free);

    const std::int64_t size = finpop_posterior_size(posterior);
    if (format == "csv") {
        std::cout << "count,mass\n";
        for (std::int64_t a = 0; a < size; ++a) {
            const double m = finpop_posterior_mass_at(posterior, a);
            if (m < tail_trim) continue;
            std::cout << a << "," << format_sig(m) << "\n";
        }
        return 0;
    }

    json entries = json::array();
    for (std::int64_t a = 0; a < size; ++a) {
        const double m = finpop_posterior_mass_at(posterior, a);
        if (m < tail_trim) continue;
        entries.push_back({{"count", a}, {"mass", round_sig(m)}});
    }
    json inputs{{"population", frame.population},
                {"sample", frame.sample},
                {"observed", frame.observed},
                {"prior", prior.spec_echo},
                {"tail_trim", tail_trim}};
    json result{{"engine", finpop_posterior_engine(posterior)},
                {"entries", std::move(entries)}};
    emit_json(envelope("posterior", std::move(inputs), std::move(result), {}));
    return 0;
}

// ---- plan ---------------------------------------------------------------

int run_plan(std::string table_path, std::int64_t lot_size, double aql,
             double elicit_factor, const std::string& format) {
    if (table_path.empty()) {
        const char* env = std::getenv("FINPOP_PLAN_TABLE");
        if (env != nullptr) table_path = env;
    }
    if (table_path.empty()) {
        fail_usage("no plan table: pass --table or set FINPOP_PLAN_TABLE");
    }

    finpop_plan_table* table = nullptr;
    check(finpop_plan_table_load(table_path.c_str(), &table));
    std::unique_ptr<finpop_plan_table, decltype(&finpop_plan_table_free)> guard(
        table, &finpop_plan_table_free);

    finpop_plan plan{};
    check(finpop_plan_table_lookup(table, lot_size, aql, &plan));

    double delta = 0.0;
    check(finpop_elicit_delta(aql, elicit_factor, &delta));
    std::int64_t k = 0;
    check(finpop_quality_threshold(lot_size, aql, &k));
    double marginal = 0.0;
    check(finpop_marginal_accept_psp(plan.sample, delta, &marginal));

    if (format == "csv") {
        std::cout << "n,ac,aql,lot_min,lot_max,delta,k,marginal_accept\n";
        std::cout << plan.sample << "," << plan.acceptance_number << ","
                  << format_sig(plan.aql) << "," << plan.lot_min << "," << plan.lot_max
                  << "," << format_sig(delta) << "," << k << "," << format_sig(marginal)
                  << "\n";
        return 0;
    }

    json inputs{{"table", table_path},
                {"lot_size", lot_size},
                {"aql", aql},
                {"elicit_factor", elicit_factor}};
    json result{{"plan",
                 {{"n", plan.sample},
                  {"ac", plan.acceptance_number},
                  {"aql", round_sig(plan.aql)},
                  {"lot_min", plan.lot_min},
                  {"lot_max", plan.lot_max}}},
                {"delta", round_sig(delta)},
                {"k", k},
                {"marginal_accept", round_sig(marginal)}};
    emit_json(envelope("plan", std::move(inputs), std::move(result), {}));
    return 0;
}

// ---- compare --------------------------------------------------------------

int run_compare(const FrameFlags& frame, const std::vector<std::string>& prior_specs,
                std::optional<std::int64_t> k, const std::string& format) {
    struct Row {
        json spec_echo;
        std::string kind;
        finpop_assurance report{};
    };
    std::vector<Row> rows;
    for (const auto& spec : prior_specs) {
        PriorHandle prior = make_prior(spec);
        Row row;
        row.spec_echo = prior.spec_echo;
        row.kind = finpop_prior_kind(prior.ptr);
        const std::int64_t k_value = k.value_or(0);
        check(finpop_assure(prior.ptr, frame.population, frame.sample, frame.observed,
                            k ? &k_value : nullptr, &row.report));
        rows.push_back(std::move(row));
    }

    const double base_zero = rows.front().report.p_zero;
    const double base_tail = rows.front().report.p_at_most_k;

    if (format == "csv") {
        std::cout << "index,kind,p_zero,p_at_most_k,p_zero_ratio,p_at_most_k_ratio\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i].report;
            std::cout << i << "," << rows[i].kind << "," << format_sig(r.p_zero) << ",";
            if (r.has_k) std::cout << format_sig(r.p_at_most_k);
            std::cout << ",";
            if (base_zero > 0.0) std::cout << format_sig(r.p_zero / base_zero);
            std::cout << ",";
            if (r.has_k && base_tail > 0.0) std::cout << format_sig(r.p_at_most_k / base_tail);
            std::cout << "\n";
        }
        return 0;
    }

    json entries = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].report;
        json entry{{"prior", rows[i].spec_echo},
                   {"kind", rows[i].kind},
                   {"p_zero", round_sig(r.p_zero)},
                   {"engine", r.engine}};
        entry["p_zero_ratio"] =
            base_zero > 0.0 ? json(round_sig(r.p_zero / base_zero)) : json();
        if (r.has_k) {
            entry["p_at_most_k"] = round_sig(r.p_at_most_k);
            entry["p_at_most_k_ratio"] =
                base_tail > 0.0 ? json(round_sig(r.p_at_most_k / base_tail)) : json();
        }
        entries.push_back(std::move(entry));
    }

    json priors_echo = json::array();
    for (const auto& row : rows) priors_echo.push_back(row.spec_echo);
    json inputs{{"population", frame.population},
                {"sample", frame.sample},
                {"observed", frame.observed},
                {"priors", std::move(priors_echo)}};
    if (k) inputs["k"] = *k;
    json result{{"entries", std::move(entries)}};
    emit_json(envelope("compare", std::move(inputs), std::move(result), {}));
    return 0;
}

// ---- simulate ---------------------------------------------------------------

json mixture_report_json(const finpop_prior* prior, std::size_t good_index,
                         std::int64_t population, const finpop_plan& plan) {
    finpop_mixture_report* report = nullptr;
    check(finpop_mixture_report_create(prior, good_index, population, &plan, &report));
    std::unique_ptr<finpop_mixture_report, decltype(&finpop_mixture_report_free)> guard(
        report, &finpop_mixture_report_free);

    const std::size_t size = static_cast<std::size_t>(population) + 1;
    std::vector<double> buffer(size);

    auto to_array = [&](const std::vector<double>& mass) {
        json arr = json::array();
        for (double m : mass) arr.push_back(round_sig(m));
        return arr;
    };

    json psp_tables = json::array();
    for (std::size_t a = 0; a < finpop_mixture_report_psp_count(report); ++a) {
        check(finpop_mixture_report_psp(report, a, buffer.data()));
        psp_tables.push_back(to_array(buffer));
    }
    check(finpop_mixture_report_mixture(report, buffer.data()));
    json mixture = to_array(buffer);
    check(finpop_mixture_report_good(report, buffer.data()));
    json good = to_array(buffer);

    double tv_pm = 0.0, tv_pg = 0.0, tv_gm = 0.0;
    check(finpop_mixture_report_tv(report, &tv_pm, &tv_pg, &tv_gm));

    return json{{"good_component", good_index},
                {"psp_posteriors", std::move(psp_tables)},
                {"mixture_conditional", std::move(mixture)},
                {"good_component_conditional", std::move(good)},
                {"tv",
                 {{"psp_vs_mixture", round_sig(tv_pm)},
                  {"psp_vs_good", round_sig(tv_pg)},
                  {"good_vs_mixture", round_sig(tv_gm)}}}};
}

int run_simulate(std::int64_t population, std::int64_t sample, std::int64_t ac,
                 const std::string& prior_spec, bool exact, std::int64_t trials,
                 std::uint64_t seed, std::int64_t enum_limit,
                 std::optional<std::int64_t> good_component, const std::string& format) {
    PriorHandle prior = make_prior(prior_spec);
    finpop_plan plan{};
    plan.sample = sample;
    plan.acceptance_number = ac;

    const bool is_mixed = std::strcmp(finpop_prior_kind(prior.ptr), "mixed") == 0;
    std::size_t good_index = 0;
    if (is_mixed) {
        if (good_component) {
            good_index = static_cast<std::size_t>(*good_component);
        } else if (prior.spec_echo.is_object() && prior.spec_echo.contains("components")) {
            // default: the component with the smallest attribute proportion
            double best = 2.0;
            const auto& comps = prior.spec_echo["components"];
            for (std::size_t i = 0; i < comps.size(); ++i) {
                const double p = comps[i].value("p", 2.0);
                if (p < best) {
                    best = p;
                    good_index = i;
                }
            }
        }
    }

    std::vector<std::string> warnings;
    json inputs{{"population", population}, {"sample", sample},
                {"ac", ac},                 {"prior", prior.spec_echo},
                {"exact", exact}};

    if (exact) {
        std::vector<double> mass(static_cast<std::size_t>(population) + 1);
        check(finpop_enumerate_conditional(prior.ptr, population, &plan, enum_limit,
                                           mass.data()));
        double accept_prob = 0.0;
        check(finpop_marginal_accept_general(prior.ptr, population, &plan, &accept_prob));

        if (format == "csv") {
            std::cout << "count,probability\n";
            for (std::size_t a = 0; a < mass.size(); ++a) {
                std::cout << a << "," << format_sig(mass[a]) << "\n";
            }
            return 0;
        }
        json entries = json::array();
        for (std::size_t a = 0; a < mass.size(); ++a) {
            entries.push_back({{"count", a}, {"probability", round_sig(mass[a])}});
        }
        json result{{"distribution", std::move(entries)},
                    {"acceptance_probability", round_sig(accept_prob)}};
        if (is_mixed) {
            result["mixture_report"] =
                mixture_report_json(prior.ptr, good_index, population, plan);
            inputs["good_component"] = good_index;
        }
        emit_json(envelope("simulate", std::move(inputs), std::move(result), warnings));
        return 0;
    }

    finpop_sim_result* sim = nullptr;
    check(finpop_simulate(prior.ptr, population, &plan, trials, seed, &sim));
    std::unique_ptr<finpop_sim_result, decltype(&finpop_sim_free)> guard(sim,
                                                                         &finpop_sim_free);
    const std::int64_t accepted = finpop_sim_accepted(sim);
    const std::int64_t total = finpop_sim_total(sim);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(population) + 1);
    check(finpop_sim_counts(sim, counts.data()));

    if (accepted == 0) {
        warnings.push_back("no lots accepted; empirical conditional is empty");
    }

    inputs["trials"] = trials;
    inputs["seed"] = seed;

    if (format == "csv") {
        std::cout << "count,occurrences,proportion\n";
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0) continue;
            std::cout << a << "," << counts[a] << ","
                      << format_sig(static_cast<double>(counts[a]) /
                                    static_cast<double>(accepted))
                      << "\n";
        }
        return 0;
    }

    json entries = json::array();
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        entries.push_back({{"count", a},
                           {"occurrences", counts[a]},
                           {"proportion", round_sig(static_cast<double>(counts[a]) /
                                                    static_cast<double>(accepted))}});
    }
    json result{{"trials", total},
                {"accepted", accepted},
                {"acceptance_rate",
                 round_sig(static_cast<double>(accepted) / static_cast<double>(total))},
                {"empty", accepted == 0},
                {"distribution", std::move(entries)}};
    if (is_mixed) {
        result["mixture_report"] =
            mixture_report_json(prior.ptr, good_index, population, plan);
        inputs["good_component"] = good_index;
    }
    emit_json(envelope("simulate", std::move(inputs), std::move(result), warnings));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian assurance for attribute sampling of finite lots"};
    app.require_subcommand(1);
    app.set_version_flag("--version", finpop_version());

    std::string format = "json";

    // assure
    auto* assure_cmd = app.add_subcommand(
        "assure", "Pr{count = 0 | evidence} and optionally Pr{count <= k}");
    FrameFlags assure_frame;
    add_frame_flags(assure_cmd, assure_frame);
    std::string assure_prior;
    assure_cmd->add_option("--prior", assure_prior, "prior spec (JSON or @file)")->required();
    std::int64_t assure_k = 0;
    auto* assure_k_opt = assure_cmd->add_option("--k", assure_k, "quality threshold k");
    assure_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // posterior
    auto* posterior_cmd =
        app.add_subcommand("posterior", "full posterior table over the marked count");
    FrameFlags posterior_frame;
    add_frame_flags(posterior_cmd, posterior_frame);
    std::string posterior_prior;
    posterior_cmd->add_option("--prior", posterior_prior, "prior spec (JSON or @file)")
        ->required();
    double tail_trim = 0.0;
    posterior_cmd->add_option("--tail-trim", tail_trim,
                              "suppress entries below this mass in the output");
    posterior_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "look up a sampling plan and elicit delta");
    std::string table_path;
    plan_cmd->add_option("--table", table_path,
                         "plan table CSV (default: $FINPOP_PLAN_TABLE)");
    std::int64_t lot_size = 0;
    plan_cmd->add_option("--lot-size", lot_size, "lot size N")->required();
    double plan_aql = 0.0;
    plan_cmd->add_option("--aql", plan_aql, "acceptance quality limit (fraction)")
        ->required();
    double elicit_factor = 0.5;
    plan_cmd->add_option("--elicit-factor", elicit_factor,
                         "delta = factor * aql (default 0.5)");
    plan_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "assurance probabilities across several priors");
    FrameFlags compare_frame;
    add_frame_flags(compare_cmd, compare_frame);
    std::vector<std::string> compare_priors;
    compare_cmd->add_option("--priors", compare_priors, "prior specs (JSON or @file)")
        ->required()
        ->expected(1, -1);
    std::int64_t compare_k = 0;
    auto* compare_k_opt = compare_cmd->add_option("--k", compare_k, "quality threshold k");
    compare_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // simulate
    auto* simulate_cmd = app.add_subcommand(
        "simulate", "distribution of the marked count conditional on acceptance");
    std::int64_t sim_population = 0;
    std::int64_t sim_sample = 0;
    std::int64_t sim_ac = 0;
    simulate_cmd->add_option("--population", sim_population, "lot size N")->required();
    simulate_cmd->add_option("--sample", sim_sample, "plan sample size n")->required();
    simulate_cmd->add_option("--ac", sim_ac, "acceptance number")->required();
    std::string sim_prior;
    simulate_cmd->add_option("--prior", sim_prior, "prior spec (JSON or @file)")->required();
    std::int64_t sim_trials = 0;
    auto* trials_opt = simulate_cmd->add_option("--trials", sim_trials, "Monte Carlo trials");
    std::uint64_t sim_seed = 0;
    simulate_cmd->add_option("--seed", sim_seed, "simulation seed (default 0)");
    bool sim_exact = false;
    simulate_cmd->add_flag("--exact", sim_exact, "exact enumeration instead of simulation");
    std::int64_t enum_limit = 0;
    simulate_cmd->add_option("--enum-limit", enum_limit,
                             "population cap for --exact (default 5000)");
    std::int64_t sim_good = 0;
    auto* good_opt = simulate_cmd->add_option(
        "--good-component", sim_good, "mixture component treated as the good lot");
    simulate_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "finpop: " << e.what() << "\n";
        return 2;
    }

    try {
        if (assure_cmd->parsed()) {
            std::optional<std::int64_t> k;
            if (assure_k_opt->count() > 0) k = assure_k;
            return run_assure(assure_frame, assure_prior, k, format);
        }
        if (posterior_cmd->parsed()) {
            return run_posterior(posterior_frame, posterior_prior, tail_trim, format);
        }
        if (plan_cmd->parsed()) {
            return run_plan(table_path, lot_size, plan_aql, elicit_factor, format);
        }
        if (compare_cmd->parsed()) {
            std::optional<std::int64_t> k;
            if (compare_k_opt->count() > 0) k = compare_k;
            return run_compare(compare_frame, compare_priors, k, format);
        }
        if (simulate_cmd->parsed()) {
            if (!sim_exact && trials_opt->count() == 0) {
                fail_usage("simulate needs --trials (or --exact)");
            }
            std::optional<std::int64_t> good;
            if (good_opt->count() > 0) good = sim_good;
            return run_simulate(sim_population, sim_sample, sim_ac, sim_prior, sim_exact,
                                sim_trials, sim_seed, enum_limit, good, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "finpop: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
