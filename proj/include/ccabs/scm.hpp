#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccabs/rational.hpp"

namespace ccabs {

using Value = int;

// A model or input file breaks a stated precondition (bad shapes, unknown
// identifiers, unreachable dimensions). Maps to CLI exit code 2.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value fell outside the declared range of a variable.
struct DomainError : StructuralError {
    using StructuralError::StructuralError;
};

// Ordered, duplicate-free list of admissible values for one variable.
struct Range {
    std::vector<Value> values;

    std::size_t size() const { return values.size(); }
    bool contains(Value v) const;
    // Position of v in the declared order; throws DomainError when absent.
    std::size_t index_of(Value v, const std::string& var) const;
    friend bool operator==(const Range&, const Range&) = default;
};

// Inclusive integer span helper for fixture construction.
Range span(Value lo, Value hi);

// Enumeration over the product of several ranges. Tuples are ordered
// lexicographically with the last position varying fastest; this single
// convention defines every canonical order in the library.
class ProductSpace {
public:
    ProductSpace() = default;
    explicit ProductSpace(std::vector<std::size_t> sizes);

    std::size_t size() const { return total_; }
    std::size_t rank() const { return sizes_.size(); }
    std::size_t index(const std::vector<std::size_t>& digits) const;
    std::vector<std::size_t> digits(std::size_t index) const;

private:
    std::vector<std::size_t> sizes_;
    std::size_t total_ = 1;
};

struct Variable {
    std::string id;
    Range range;
    friend bool operator==(const Variable&, const Variable&) = default;
};

// Lookup-table mechanism for one endogenous variable. The table is flat over
// the product of the parent ranges (last parent fastest); -1 marks a missing
// entry so validate can report partial tables.
struct Equation {
    std::vector<std::string> parents;
    std::vector<Value> table;
    friend bool operator==(const Equation&, const Equation&) = default;
};

// Partial assignment of endogenous variables, kept sorted by variable id so
// comparisons are canonical. Empty targets is the null intervention.
struct Intervention {
    std::vector<std::pair<std::string, Value>> targets;

    static Intervention null() { return {}; }
    bool empty() const { return targets.empty(); }
    void set(const std::string& id, Value v);
    std::optional<Value> value_of(const std::string& id) const;
    // i <= j: every target of i appears in j with the same value.
    bool weaker_equal(const Intervention& other) const;
    std::string str() const;
    friend bool operator==(const Intervention&, const Intervention&) = default;
    friend auto operator<=>(const Intervention&, const Intervention&) = default;
};

// Admissible interventions with an explicit order relation. File-loaded
// posets always use the agreement order; the explicit form exists so broken
// relations can be constructed and rejected in tests.
struct InterventionPoset {
    std::vector<Intervention> members;
    // relation[a][b] true when members[a] <= members[b].
    std::vector<std::vector<bool>> relation;

    static InterventionPoset with_agreement_order(std::vector<Intervention> members);
    std::optional<std::size_t> index_of(const Intervention& i) const;
    bool leq(std::size_t a, std::size_t b) const { return relation[a][b]; }
    friend bool operator==(const InterventionPoset&, const InterventionPoset&) = default;
};

struct FiniteScm {
    std::vector<Variable> exogenous;
    std::vector<Variable> endogenous;
    // One equation per endogenous variable, same order as `endogenous`.
    std::vector<Equation> equations;
    // Flat joint table over the exogenous product space.
    std::vector<Rational> prior;
    InterventionPoset interventions;

    ProductSpace exo_space() const;
    ProductSpace endo_space() const;
    std::optional<std::size_t> exo_index(const std::string& id) const;
    std::optional<std::size_t> endo_index(const std::string& id) const;
    const Variable* find_variable(const std::string& id) const;

    // Evaluation order of the endogenous variables; empty when the
    // parent graph restricted to endogenous variables has a cycle.
    std::optional<std::vector<std::size_t>> topo_order() const;

    bool operator==(const FiniteScm&) const = default;
};

struct Violation {
    std::string kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Joint distribution over endogenous assignments; zero-mass entries are
// never stored, so map equality is distribution equality.
using Distribution = std::map<std::vector<Value>, Rational>;

// Checks every structural invariant and returns all breaches: unknown or
// duplicate ids, partial or out-of-range tables, cyclic equations, a prior
// that is negative or does not sum to one, and intervention poset defects.
ValidationReport validate(const FiniteScm& scm);

// Evaluates the model at the exogenous point u under intervention i.
// Intervened variables take their forced value; the rest follow their
// equations in topological order. Returns values in endogenous order.
std::vector<Value> solve(const FiniteScm& scm, const std::vector<Value>& u,
                         const Intervention& i);

// Exact image of the exogenous prior under solve(., i).
Distribution pushforward(const FiniteScm& scm, const Intervention& i);

// Copy of the model with every intervened variable's equation replaced by a
// constant; the original is untouched.
FiniteScm intervene(const FiniteScm& scm, const Intervention& i);

}  // namespace ccabs
