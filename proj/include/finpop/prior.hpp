#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace finpop {

/// Finite-population evidence: a lot of `population` items from which
/// `sample` were drawn without replacement and `observed` carried the
/// attribute.
struct LotFrame {
    std::int64_t population = 0;
    std::int64_t sample = 0;
    std::int64_t observed = 0;

    void validate() const; // throws on 0 <= observed <= sample <= population violations
};

struct MixtureComponent {
    double weight = 0.0;
    double p = 0.0;
};

enum class PriorKind { uniform, bounded_uniform, binomial_psp, mixed, tabulated };

/// Prior over the unknown number of attribute-bearing items in a lot.
/// Every family reduces to a mass function on {0, ..., population}.
class Prior {
public:
    static Prior uniform();
    static Prior bounded_uniform(std::int64_t max_count);
    static Prior binomial_psp(double delta);
    static Prior mixed(std::vector<MixtureComponent> components);
    /// Entries must be nonnegative with a positive sum; normalized on entry.
    static Prior tabulated(std::vector<double> mass);

    /// Wire format used by the CLI, e.g. {"kind":"psp","delta":0.0005}.
    /// Tabulated priors may reference a one-column CSV via {"file": "..."}.
    static Prior from_json(const std::string& spec);

    PriorKind kind() const;
    const char* kind_name() const;

    /// p(A) for A = 0..population, summing to 1 within fp accuracy.
    std::vector<double> mass(std::int64_t population) const;

    /// ln p(A), computed natively in log space so deep binomial tails keep
    /// their magnitude instead of underflowing to zero.
    std::vector<double> log_mass(std::int64_t population) const;

    /// Drops every mixture component but one: the partially specified prior
    /// used for post hoc inference once a lot has been accepted as good.
    Prior restrict_to_component(std::size_t index) const;

    // Parameter accessors; each throws unless the prior is of the right kind.
    std::int64_t max_count() const;
    double delta() const;
    const std::vector<MixtureComponent>& components() const;
    const std::vector<double>& table() const;

private:
    struct Uniform {};
    struct BoundedUniform {
        std::int64_t max_count;
    };
    struct BinomialPsp {
        double delta;
    };
    struct Mixed {
        std::vector<MixtureComponent> components;
    };
    struct Tabulated {
        std::vector<double> mass;
    };

    using Value = std::variant<Uniform, BoundedUniform, BinomialPsp, Mixed, Tabulated>;

    explicit Prior(Value value) : value_(std::move(value)) {}

    Value value_;
};

/// One-column CSV of masses, one value per line (used for tabulated priors).
std::vector<double> load_mass_csv(const std::string& path);

} // namespace finpop
