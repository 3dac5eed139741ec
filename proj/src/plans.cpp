#include "finpop/plans.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "finpop/error.hpp"
#include "finpop/logmath.hpp"

namespace finpop {

void SamplingPlan::validate() const {
    if (sample < 1) {
        raise(ErrorCode::invalid_argument,
              "sampling plan: sample size must be at least 1, got " + std::to_string(sample));
    }
    if (acceptance_number < 0 || acceptance_number > sample) {
        raise(ErrorCode::invalid_argument,
              "sampling plan: need 0 <= acceptance number <= sample size, got " +
                  std::to_string(acceptance_number));
    }
    if (aql && !(*aql > 0.0 && *aql < 1.0)) {
        raise(ErrorCode::invalid_argument,
              "sampling plan: aql must lie in (0, 1), got " + std::to_string(*aql));
    }
    if (lot_range && lot_range->first > lot_range->second) {
        raise(ErrorCode::invalid_argument, "sampling plan: lot range min exceeds max");
    }
}

Decision decide(const SamplingPlan& plan, std::int64_t observed) {
    plan.validate();
    if (observed < 0 || observed > plan.sample) {
        raise(ErrorCode::invalid_argument,
              "decide: observed count must lie in [0, sample size], got " +
                  std::to_string(observed));
    }
    return Decision{observed <= plan.acceptance_number, observed, plan};
}

double elicit_delta(double aql, double factor) {
    if (!(aql > 0.0 && aql < 1.0)) {
        raise(ErrorCode::invalid_argument,
              "elicit_delta: aql must lie in (0, 1), got " + std::to_string(aql));
    }
    if (!(factor > 0.0)) {
        raise(ErrorCode::invalid_argument, "elicit_delta: factor must be positive");
    }
    const double delta = factor * aql;
    if (delta > 1.0) {
        raise(ErrorCode::invalid_argument,
              "elicit_delta: factor * aql = " + std::to_string(delta) + " exceeds 1");
    }
    return delta;
}

std::int64_t quality_threshold_k(std::int64_t population, double aql) {
    if (population < 0) {
        raise(ErrorCode::invalid_argument, "quality_threshold_k: population must be nonnegative");
    }
    if (!(aql > 0.0 && aql < 1.0)) {
        raise(ErrorCode::invalid_argument,
              "quality_threshold_k: aql must lie in (0, 1), got " + std::to_string(aql));
    }
    const double product = static_cast<double>(population) * aql;
    // A few ulps of slack: decimal AQLs round so that exact products can land
    // a hair under the intended integer (e.g. 100 * 0.29 -> 28.999...996).
    const double guarded = product * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
    return static_cast<std::int64_t>(std::floor(guarded));
}

double marginal_accept_psp(std::int64_t sample, double delta) {
    if (sample < 0) {
        raise(ErrorCode::invalid_argument, "marginal_accept_psp: sample must be nonnegative");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        raise(ErrorCode::invalid_argument, "marginal_accept_psp: delta must lie in [0, 1]");
    }
    if (sample == 0) {
        return 1.0;
    }
    if (delta == 1.0) {
        return 0.0;
    }
    return std::exp(static_cast<double>(sample) * std::log1p(-delta));
}

namespace {

double accept_prob_given_marked(std::int64_t population, std::int64_t marked,
                                const SamplingPlan& plan) {
    double sum = 0.0;
    for (std::int64_t j = 0; j <= plan.acceptance_number; ++j) {
        sum += hypergeom_pmf(population, marked, plan.sample, j);
    }
    return std::min(sum, 1.0);
}

} // namespace

double marginal_accept_general(const Prior& prior, std::int64_t population,
                               const SamplingPlan& plan) {
    plan.validate();
    if (plan.sample > population) {
        raise(ErrorCode::invalid_argument,
              "marginal_accept_general: plan sample size exceeds population");
    }
    const std::vector<double> prior_mass = prior.mass(population);
    double total = 0.0;
    for (std::int64_t marked = 0; marked <= population; ++marked) {
        const double w = prior_mass[static_cast<std::size_t>(marked)];
        if (w == 0.0) continue;
        total += w * accept_prob_given_marked(population, marked, plan);
    }
    return std::min(total, 1.0);
}

std::vector<OcPoint> oc_curve(const SamplingPlan& plan, std::int64_t population,
                              std::span<const std::int64_t> marked_counts) {
    plan.validate();
    if (plan.sample > population) {
        raise(ErrorCode::invalid_argument, "oc_curve: plan sample size exceeds population");
    }
    std::vector<OcPoint> out;
    out.reserve(marked_counts.size());
    for (std::int64_t marked : marked_counts) {
        if (marked < 0 || marked > population) {
            raise(ErrorCode::invalid_argument,
                  "oc_curve: marked count " + std::to_string(marked) + " outside [0, population]");
        }
        out.push_back({marked, accept_prob_given_marked(population, marked, plan)});
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto begin = field.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            fields.emplace_back();
        } else {
            const auto end = field.find_last_not_of(" \t\r");
            fields.push_back(field.substr(begin, end - begin + 1));
        }
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line,
                             std::size_t column, const std::string& what) {
    raise(ErrorCode::parse, source + ":" + std::to_string(line) + ":" +
                                std::to_string(column) + ": " + what);
}

std::int64_t parse_int_field(const std::string& field, const std::string& source,
                             std::size_t line, std::size_t column) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        parse_fail(source, line, column, "expected an integer, got '" + field + "'");
    }
}

double parse_double_field(const std::string& field, const std::string& source,
                          std::size_t line, std::size_t column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        parse_fail(source, line, column, "expected a number, got '" + field + "'");
    }
}

} // namespace

PlanTable PlanTable::parse(std::string_view text, const std::string& source_name) {
    PlanTable table;
    std::stringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;

    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (!header_seen) {
            const std::vector<std::string> expected = {"lot_min", "lot_max", "aql", "n", "ac"};
            if (fields != expected) {
                parse_fail(source_name, lineno, 1,
                           "expected header 'lot_min,lot_max,aql,n,ac'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 5) {
            parse_fail(source_name, lineno, fields.size(),
                       "expected 5 fields, got " + std::to_string(fields.size()));
        }
        SamplingPlan plan;
        const std::int64_t lot_min = parse_int_field(fields[0], source_name, lineno, 1);
        const std::int64_t lot_max = parse_int_field(fields[1], source_name, lineno, 2);
        plan.aql = parse_double_field(fields[2], source_name, lineno, 3);
        plan.sample = parse_int_field(fields[3], source_name, lineno, 4);
        plan.acceptance_number = parse_int_field(fields[4], source_name, lineno, 5);
        plan.lot_range = {lot_min, lot_max};
        try {
            plan.validate();
        } catch (const Error& e) {
            parse_fail(source_name, lineno, 1, e.what());
        }
        table.plans_.push_back(std::move(plan));
    }
    if (!header_seen) {
        raise(ErrorCode::parse, source_name + ": empty plan table");
    }

    // Overlapping lot ranges for the same AQL would make lookups ambiguous.
    for (std::size_t i = 0; i < table.plans_.size(); ++i) {
        for (std::size_t j = i + 1; j < table.plans_.size(); ++j) {
            const auto& a = table.plans_[i];
            const auto& b = table.plans_[j];
            if (*a.aql != *b.aql) continue;
            if (a.lot_range->first <= b.lot_range->second &&
                b.lot_range->first <= a.lot_range->second) {
                raise(ErrorCode::invalid_argument,
                      source_name + ": overlapping lot ranges for aql " +
                          std::to_string(*a.aql));
            }
        }
    }
    return table;
}

PlanTable PlanTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::io, "cannot open plan table: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

const SamplingPlan& PlanTable::lookup(std::int64_t lot_size, double aql) const {
    for (const auto& plan : plans_) {
        if (*plan.aql == aql && plan.lot_range->first <= lot_size &&
            lot_size <= plan.lot_range->second) {
            return plan;
        }
    }
    raise(ErrorCode::no_plan, "no plan for lot size " + std::to_string(lot_size) +
                                  " at aql " + std::to_string(aql));
}

} // namespace finpop
