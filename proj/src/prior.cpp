#include "finpop/prior.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "finpop/error.hpp"
#include "finpop/logmath.hpp"

namespace finpop {

namespace {

constexpr double kWeightTol = 1e-12;

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        raise(ErrorCode::invalid_argument,
              std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

// Rescale a computed mass row to unit sum; long binomial rows otherwise
// carry a few e-12 of accumulated log-gamma error.
void normalize(std::vector<double>& mass) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (double& m : mass) {
        m /= total;
    }
}

} // namespace

void LotFrame::validate() const {
    if (population < 0 || sample < 0 || sample > population) {
        raise(ErrorCode::invalid_argument,
              "lot frame: need 0 <= sample <= population, got population=" +
                  std::to_string(population) + " sample=" + std::to_string(sample));
    }
    if (observed < 0 || observed > sample) {
        raise(ErrorCode::invalid_argument,
              "lot frame: need 0 <= observed <= sample, got observed=" +
                  std::to_string(observed));
    }
}

Prior Prior::uniform() { return Prior(Value(Uniform{})); }

Prior Prior::bounded_uniform(std::int64_t max_count) {
    if (max_count < 0) {
        raise(ErrorCode::invalid_argument,
              "bounded-uniform prior: max count must be nonnegative, got " +
                  std::to_string(max_count));
    }
    return Prior(Value(BoundedUniform{max_count}));
}

Prior Prior::binomial_psp(double delta) {
    check_probability(delta, "psp prior: delta");
    return Prior(Value(BinomialPsp{delta}));
}

Prior Prior::mixed(std::vector<MixtureComponent> components) {
    if (components.empty()) {
        raise(ErrorCode::invalid_argument, "mixed prior: needs at least one component");
    }
    double weight_sum = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) {
            raise(ErrorCode::invalid_argument, "mixed prior: weights must be nonnegative");
        }
        check_probability(c.p, "mixed prior: component p");
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > kWeightTol) {
        raise(ErrorCode::invalid_argument,
              "mixed prior: weights must sum to 1, got " + std::to_string(weight_sum));
    }
    return Prior(Value(Mixed{std::move(components)}));
}

Prior Prior::tabulated(std::vector<double> mass) {
    if (mass.empty()) {
        raise(ErrorCode::invalid_argument, "tabulated prior: mass vector is empty");
    }
    double sum = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            raise(ErrorCode::invalid_argument,
                  "tabulated prior: entries must be finite and nonnegative");
        }
        sum += m;
    }
    if (!(sum > 0.0)) {
        raise(ErrorCode::invalid_argument, "tabulated prior: total mass must be positive");
    }
    for (double& m : mass) {
        m /= sum;
    }
    return Prior(Value(Tabulated{std::move(mass)}));
}

PriorKind Prior::kind() const {
    switch (value_.index()) {
        case 0: return PriorKind::uniform;
        case 1: return PriorKind::bounded_uniform;
        case 2: return PriorKind::binomial_psp;
        case 3: return PriorKind::mixed;
        default: return PriorKind::tabulated;
    }
}

const char* Prior::kind_name() const {
    switch (kind()) {
        case PriorKind::uniform: return "uniform";
        case PriorKind::bounded_uniform: return "bounded-uniform";
        case PriorKind::binomial_psp: return "psp";
        case PriorKind::mixed: return "mixed";
        default: return "tabulated";
    }
}

std::vector<double> Prior::mass(std::int64_t population) const {
    if (population < 0) {
        raise(ErrorCode::invalid_argument, "prior mass: population must be nonnegative");
    }
    const std::size_t size = static_cast<std::size_t>(population) + 1;
    std::vector<double> out(size, 0.0);

    if (const auto* u = std::get_if<Uniform>(&value_)) {
        (void)u;
        const double each = 1.0 / static_cast<double>(population + 1);
        std::fill(out.begin(), out.end(), each);
    } else if (const auto* b = std::get_if<BoundedUniform>(&value_)) {
        if (b->max_count > population) {
            raise(ErrorCode::invalid_argument,
                  "bounded-uniform prior: max count " + std::to_string(b->max_count) +
                      " exceeds population " + std::to_string(population));
        }
        const double each = 1.0 / static_cast<double>(b->max_count + 1);
        for (std::int64_t a = 0; a <= b->max_count; ++a) {
            out[static_cast<std::size_t>(a)] = each;
        }
    } else if (const auto* psp = std::get_if<BinomialPsp>(&value_)) {
        for (std::int64_t a = 0; a <= population; ++a) {
            out[static_cast<std::size_t>(a)] = binom_pmf(population, psp->delta, a);
        }
        normalize(out);
    } else if (const auto* mix = std::get_if<Mixed>(&value_)) {
        for (const auto& c : mix->components) {
            if (c.weight == 0.0) continue;
            for (std::int64_t a = 0; a <= population; ++a) {
                out[static_cast<std::size_t>(a)] += c.weight * binom_pmf(population, c.p, a);
            }
        }
        normalize(out);
    } else {
        const auto& tab = std::get<Tabulated>(value_);
        if (tab.mass.size() != size) {
            raise(ErrorCode::invalid_argument,
                  "tabulated prior: table has " + std::to_string(tab.mass.size()) +
                      " entries but population " + std::to_string(population) +
                      " needs " + std::to_string(size));
        }
        out = tab.mass;
    }
    return out;
}

std::vector<double> Prior::log_mass(std::int64_t population) const {
    if (population < 0) {
        raise(ErrorCode::invalid_argument, "prior mass: population must be nonnegative");
    }
    const std::size_t size = static_cast<std::size_t>(population) + 1;
    std::vector<double> out(size, kNegInf);

    if (std::holds_alternative<Uniform>(value_)) {
        const double each = -std::log(static_cast<double>(population + 1));
        std::fill(out.begin(), out.end(), each);
    } else if (const auto* b = std::get_if<BoundedUniform>(&value_)) {
        if (b->max_count > population) {
            raise(ErrorCode::invalid_argument,
                  "bounded-uniform prior: max count " + std::to_string(b->max_count) +
                      " exceeds population " + std::to_string(population));
        }
        const double each = -std::log(static_cast<double>(b->max_count + 1));
        for (std::int64_t a = 0; a <= b->max_count; ++a) {
            out[static_cast<std::size_t>(a)] = each;
        }
    } else if (const auto* psp = std::get_if<BinomialPsp>(&value_)) {
        for (std::int64_t a = 0; a <= population; ++a) {
            out[static_cast<std::size_t>(a)] = log_binom_pmf(population, psp->delta, a);
        }
    } else if (const auto* mix = std::get_if<Mixed>(&value_)) {
        std::vector<double> terms(mix->components.size());
        for (std::int64_t a = 0; a <= population; ++a) {
            terms.clear();
            for (const auto& c : mix->components) {
                if (c.weight == 0.0) continue;
                terms.push_back(std::log(c.weight) + log_binom_pmf(population, c.p, a));
            }
            out[static_cast<std::size_t>(a)] = log_sum_exp(terms);
        }
    } else {
        const std::vector<double> linear = mass(population);
        for (std::size_t i = 0; i < size; ++i) {
            out[i] = std::log(linear[i]);
        }
    }
    return out;
}

Prior Prior::restrict_to_component(std::size_t index) const {
    const auto* mix = std::get_if<Mixed>(&value_);
    if (mix == nullptr) {
        raise(ErrorCode::invalid_argument,
              "restrict_to_component: prior is not a mixture");
    }
    if (index >= mix->components.size()) {
        raise(ErrorCode::invalid_argument,
              "restrict_to_component: component index " + std::to_string(index) +
                  " out of range (have " + std::to_string(mix->components.size()) + ")");
    }
    return binomial_psp(mix->components[index].p);
}

std::int64_t Prior::max_count() const {
    if (const auto* b = std::get_if<BoundedUniform>(&value_)) {
        return b->max_count;
    }
    raise(ErrorCode::invalid_argument, "prior is not bounded-uniform");
}

double Prior::delta() const {
    if (const auto* psp = std::get_if<BinomialPsp>(&value_)) {
        return psp->delta;
    }
    raise(ErrorCode::invalid_argument, "prior is not a psp prior");
}

const std::vector<MixtureComponent>& Prior::components() const {
    if (const auto* mix = std::get_if<Mixed>(&value_)) {
        return mix->components;
    }
    raise(ErrorCode::invalid_argument, "prior is not a mixture");
}

const std::vector<double>& Prior::table() const {
    if (const auto* tab = std::get_if<Tabulated>(&value_)) {
        return tab->mass;
    }
    raise(ErrorCode::invalid_argument, "prior is not tabulated");
}

std::vector<double> load_mass_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorCode::io, "cannot open mass file: " + path);
    }
    std::vector<double> mass;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // trim whitespace and allow blank trailing lines
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        const std::string field = line.substr(begin, end - begin + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
            mass.push_back(v);
        } catch (const std::exception&) {
            raise(ErrorCode::parse, path + ":" + std::to_string(lineno) +
                                        ": expected a single numeric mass, got '" + field + "'");
        }
    }
    if (mass.empty()) {
        raise(ErrorCode::parse, path + ": no mass entries found");
    }
    return mass;
}

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        raise(ErrorCode::parse, where + ": missing numeric field '" + key + "'");
    }
    return obj[key].get<double>();
}

} // namespace

Prior Prior::from_json(const std::string& spec) {
    json obj;
    try {
        obj = json::parse(spec);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::parse, std::string("prior spec is not valid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) {
        raise(ErrorCode::parse, "prior spec must be an object with a string 'kind'");
    }
    const std::string kind = obj["kind"].get<std::string>();

    if (kind == "uniform") {
        return uniform();
    }
    if (kind == "bounded-uniform") {
        const double m = require_number(obj, "m", "bounded-uniform prior");
        if (m != std::floor(m)) {
            raise(ErrorCode::parse, "bounded-uniform prior: 'm' must be an integer");
        }
        return bounded_uniform(static_cast<std::int64_t>(m));
    }
    if (kind == "psp") {
        return binomial_psp(require_number(obj, "delta", "psp prior"));
    }
    if (kind == "mixed") {
        if (!obj.contains("components") || !obj["components"].is_array() ||
            obj["components"].empty()) {
            raise(ErrorCode::parse, "mixed prior: needs a nonempty 'components' array");
        }
        std::vector<MixtureComponent> components;
        for (const auto& c : obj["components"]) {
            if (!c.is_object()) {
                raise(ErrorCode::parse, "mixed prior: each component must be an object");
            }
            components.push_back({require_number(c, "weight", "mixed prior component"),
                                  require_number(c, "p", "mixed prior component")});
        }
        return mixed(std::move(components));
    }
    if (kind == "tabulated") {
        if (obj.contains("file")) {
            if (!obj["file"].is_string()) {
                raise(ErrorCode::parse, "tabulated prior: 'file' must be a string path");
            }
            return tabulated(load_mass_csv(obj["file"].get<std::string>()));
        }
        if (!obj.contains("mass") || !obj["mass"].is_array() || obj["mass"].empty()) {
            raise(ErrorCode::parse,
                  "tabulated prior: needs a nonempty 'mass' array or a 'file' path");
        }
        std::vector<double> mass;
        for (const auto& v : obj["mass"]) {
            if (!v.is_number()) {
                raise(ErrorCode::parse, "tabulated prior: mass entries must be numbers");
            }
            mass.push_back(v.get<double>());
        }
        return tabulated(std::move(mass));
    }
    raise(ErrorCode::parse, "unknown prior kind '" + kind +
                                "' (expected uniform, bounded-uniform, psp, mixed or tabulated)");
}

} // namespace finpop
