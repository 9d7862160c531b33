#include "ccabs/scm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ccabs {

bool Range::contains(Value v) const {
    return std::find(values.begin(), values.end(), v) != values.end();
}

std::size_t Range::index_of(Value v, const std::string& var) const {
    auto it = std::find(values.begin(), values.end(), v);
    if (it == values.end()) {
        throw DomainError("variable '" + var + "': value " + std::to_string(v) +
                          " not in range");
    }
    return static_cast<std::size_t>(it - values.begin());
}

Range span(Value lo, Value hi) {
    Range r;
    for (Value v = lo; v <= hi; ++v) {
        r.values.push_back(v);
    }
    return r;
}

ProductSpace::ProductSpace(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    for (std::size_t s : sizes_) {
        total_ *= s;
    }
}

std::size_t ProductSpace::index(const std::vector<std::size_t>& digits) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        idx = idx * sizes_[k] + digits[k];
    }
    return idx;
}

std::vector<std::size_t> ProductSpace::digits(std::size_t index) const {
    std::vector<std::size_t> out(sizes_.size(), 0);
    for (std::size_t k = sizes_.size(); k-- > 0;) {
        out[k] = index % sizes_[k];
        index /= sizes_[k];
    }
    return out;
}

void Intervention::set(const std::string& id, Value v) {
    auto it = std::lower_bound(targets.begin(), targets.end(), id,
                               [](const auto& p, const std::string& key) { return p.first < key; });
    if (it != targets.end() && it->first == id) {
        it->second = v;
    } else {
        targets.insert(it, {id, v});
    }
}

std::optional<Value> Intervention::value_of(const std::string& id) const {
    for (const auto& [tid, v] : targets) {
        if (tid == id) return v;
    }
    return std::nullopt;
}

bool Intervention::weaker_equal(const Intervention& other) const {
    for (const auto& [id, v] : targets) {
        auto ov = other.value_of(id);
        if (!ov || *ov != v) return false;
    }
    return true;
}

std::string Intervention::str() const {
    if (targets.empty()) return "{}";
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (k) os << ", ";
        os << targets[k].first << "<-" << targets[k].second;
    }
    os << "}";
    return os.str();
}

InterventionPoset InterventionPoset::with_agreement_order(std::vector<Intervention> members) {
    InterventionPoset p;
    p.members = std::move(members);
    std::size_t n = p.members.size();
    p.relation.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            p.relation[a][b] = p.members[a].weaker_equal(p.members[b]);
        }
    }
    return p;
}

std::optional<std::size_t> InterventionPoset::index_of(const Intervention& i) const {
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (members[k] == i) return k;
    }
    return std::nullopt;
}

namespace {

std::vector<std::size_t> range_sizes(const std::vector<Variable>& vars) {
    std::vector<std::size_t> sizes;
    sizes.reserve(vars.size());
    for (const auto& v : vars) {
        sizes.push_back(v.range.size());
    }
    return sizes;
}

}  // namespace

ProductSpace FiniteScm::exo_space() const { return ProductSpace(range_sizes(exogenous)); }
ProductSpace FiniteScm::endo_space() const { return ProductSpace(range_sizes(endogenous)); }

std::optional<std::size_t> FiniteScm::exo_index(const std::string& id) const {
    for (std::size_t k = 0; k < exogenous.size(); ++k) {
        if (exogenous[k].id == id) return k;
    }
    return std::nullopt;
}

std::optional<std::size_t> FiniteScm::endo_index(const std::string& id) const {
    for (std::size_t k = 0; k < endogenous.size(); ++k) {
        if (endogenous[k].id == id) return k;
    }
    return std::nullopt;
}

const Variable* FiniteScm::find_variable(const std::string& id) const {
    if (auto k = exo_index(id)) return &exogenous[*k];
    if (auto k = endo_index(id)) return &endogenous[*k];
    return nullptr;
}

std::optional<std::vector<std::size_t>> FiniteScm::topo_order() const {
    std::size_t n = endogenous.size();
    // Kahn's algorithm over endogenous-to-endogenous parent edges.
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t k = 0; k < n && k < equations.size(); ++k) {
        for (const auto& pid : equations[k].parents) {
            if (auto p = endo_index(pid)) {
                children[*p].push_back(k);
                ++indegree[k];
            }
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < n; ++k) {
        if (indegree[k] == 0) ready.push_back(k);
    }
    std::vector<std::size_t> order;
    for (std::size_t at = 0; at < ready.size(); ++at) {
        std::size_t v = ready[at];
        order.push_back(v);
        for (std::size_t c : children[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

namespace {

void check_variables(const FiniteScm& scm, ValidationReport& report) {
    std::set<std::string> seen;
    auto check_list = [&](const std::vector<Variable>& vars, const char* kind) {
        for (const auto& v : vars) {
            if (!seen.insert(v.id).second) {
                report.violations.push_back(
                    {"duplicate-id", std::string(kind) + " variable '" + v.id + "' declared twice"});
            }
            if (v.range.values.empty()) {
                report.violations.push_back(
                    {"empty-range", std::string(kind) + " variable '" + v.id + "' has an empty range"});
            }
            std::set<Value> vals(v.range.values.begin(), v.range.values.end());
            if (vals.size() != v.range.values.size()) {
                report.violations.push_back(
                    {"duplicate-value", "range of '" + v.id + "' repeats a value"});
            }
        }
    };
    check_list(scm.exogenous, "exogenous");
    check_list(scm.endogenous, "endogenous");
}

void check_equations(const FiniteScm& scm, ValidationReport& report) {
    if (scm.equations.size() != scm.endogenous.size()) {
        report.violations.push_back(
            {"equation-count", "expected " + std::to_string(scm.endogenous.size()) +
                                   " equations, found " + std::to_string(scm.equations.size())});
    }
    std::size_t n = std::min(scm.equations.size(), scm.endogenous.size());
    for (std::size_t k = 0; k < n; ++k) {
        const auto& child = scm.endogenous[k];
        const auto& eq = scm.equations[k];
        std::size_t domain = 1;
        bool parents_ok = true;
        for (const auto& pid : eq.parents) {
            const Variable* pv = scm.find_variable(pid);
            if (!pv) {
                report.violations.push_back(
                    {"unknown-parent", "equation for '" + child.id + "' names unknown parent '" + pid + "'"});
                parents_ok = false;
                continue;
            }
            domain *= pv->range.size();
        }
        if (!parents_ok) continue;
        if (eq.table.size() != domain) {
            report.violations.push_back(
                {"table-shape", "equation for '" + child.id + "' has " +
                                    std::to_string(eq.table.size()) + " entries, expected " +
                                    std::to_string(domain)});
            continue;
        }
        for (std::size_t at = 0; at < eq.table.size(); ++at) {
            Value out = eq.table[at];
            if (out == -1) {
                report.violations.push_back(
                    {"partial-table", "equation for '" + child.id + "' is missing an entry"});
            } else if (!child.range.contains(out)) {
                report.violations.push_back(
                    {"out-of-range", "equation for '" + child.id + "' outputs " +
                                         std::to_string(out) + " outside its range"});
            }
        }
    }
    if (auto order = scm.topo_order(); !order) {
        // Name every variable on a cycle: those never reaching indegree zero.
        std::vector<std::string> cyclic;
        std::size_t vars = scm.endogenous.size();
        std::vector<bool> resolved(vars, false);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t k = 0; k < vars && k < scm.equations.size(); ++k) {
                if (resolved[k]) continue;
                bool ready = true;
                for (const auto& pid : scm.equations[k].parents) {
                    auto p = scm.endo_index(pid);
                    if (p && !resolved[*p]) ready = false;
                }
                if (ready) {
                    resolved[k] = true;
                    progress = true;
                }
            }
        }
        std::string names;
        for (std::size_t k = 0; k < vars; ++k) {
            if (!resolved[k]) {
                if (!names.empty()) names += ", ";
                names += scm.endogenous[k].id;
            }
        }
        report.violations.push_back({"cycle", "equations form a cycle through {" + names + "}"});
    }
}

void check_prior(const FiniteScm& scm, ValidationReport& report) {
    std::size_t points = scm.exo_space().size();
    if (scm.prior.size() != points) {
        report.violations.push_back(
            {"prior-shape", "prior has " + std::to_string(scm.prior.size()) +
                                " entries, expected " + std::to_string(points)});
        return;
    }
    Rational sum;
    bool negative = false;
    for (const auto& p : scm.prior) {
        if (p.is_negative()) negative = true;
        sum += p;
    }
    if (negative) {
        report.violations.push_back({"prior-negative", "prior assigns negative mass"});
    }
    if (sum != Rational(1)) {
        report.violations.push_back({"prior-sum", "prior sums to " + sum.str() + ", expected 1"});
    }
}

void check_poset(const FiniteScm& scm, ValidationReport& report) {
    const auto& poset = scm.interventions;
    std::size_t n = poset.members.size();
    for (const auto& i : poset.members) {
        for (const auto& [id, v] : i.targets) {
            auto k = scm.endo_index(id);
            if (!k) {
                report.violations.push_back(
                    {"intervention-target", "intervention " + i.str() + " targets non-endogenous '" + id + "'"});
            } else if (!scm.endogenous[*k].range.contains(v)) {
                report.violations.push_back(
                    {"intervention-value", "intervention " + i.str() + " assigns out-of-range value to '" + id + "'"});
            }
        }
    }
    std::set<Intervention> unique(poset.members.begin(), poset.members.end());
    if (unique.size() != n) {
        report.violations.push_back({"poset-duplicate", "intervention listed twice"});
    }
    auto nil = poset.index_of(Intervention::null());
    if (!nil) {
        report.violations.push_back({"poset-empty", "the empty intervention is not admissible"});
    }
    if (poset.relation.size() != n) {
        report.violations.push_back({"poset-shape", "order relation does not cover all members"});
        return;
    }
    for (const auto& row : poset.relation) {
        if (row.size() != n) {
            report.violations.push_back({"poset-shape", "order relation does not cover all members"});
            return;
        }
    }
    if (nil) {
        for (std::size_t b = 0; b < n; ++b) {
            if (!poset.relation[*nil][b]) {
                report.violations.push_back(
                    {"poset-bottom", "empty intervention is not below " + poset.members[b].str()});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (!poset.relation[a][a]) {
            report.violations.push_back({"poset-reflexive", "order misses " + poset.members[a].str() +
                                                                " <= itself"});
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && poset.relation[a][b] && poset.relation[b][a]) {
                report.violations.push_back(
                    {"poset-antisymmetric", "distinct members " + poset.members[a].str() + " and " +
                                                poset.members[b].str() + " order both ways"});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (!poset.relation[a][b]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (poset.relation[b][c] && !poset.relation[a][c]) {
                    report.violations.push_back(
                        {"poset-transitive", "order misses " + poset.members[a].str() + " <= " +
                                                 poset.members[c].str()});
                }
            }
        }
    }
}

}  // namespace

ValidationReport validate(const FiniteScm& scm) {
    ValidationReport report;
    check_variables(scm, report);
    check_equations(scm, report);
    check_prior(scm, report);
    check_poset(scm, report);
    return report;
}

std::vector<Value> solve(const FiniteScm& scm, const std::vector<Value>& u,
                         const Intervention& i) {
    if (u.size() != scm.exogenous.size()) {
        throw DomainError("exogenous assignment has " + std::to_string(u.size()) +
                          " values, expected " + std::to_string(scm.exogenous.size()));
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
        scm.exogenous[k].range.index_of(u[k], scm.exogenous[k].id);
    }
    for (const auto& [id, v] : i.targets) {
        auto k = scm.endo_index(id);
        if (!k) {
            throw DomainError("intervention targets non-endogenous '" + id + "'");
        }
        scm.endogenous[*k].range.index_of(v, id);
    }
    auto order = scm.topo_order();
    if (!order) {
        throw StructuralError("cannot solve: equations form a cycle");
    }
    std::vector<Value> out(scm.endogenous.size(), 0);
    for (std::size_t k : *order) {
        const auto& var = scm.endogenous[k];
        if (auto forced = i.value_of(var.id)) {
            out[k] = *forced;
            continue;
        }
        const auto& eq = scm.equations[k];
        std::size_t idx = 0;
        for (const auto& pid : eq.parents) {
            if (auto e = scm.exo_index(pid)) {
                idx = idx * scm.exogenous[*e].range.size() +
                      scm.exogenous[*e].range.index_of(u[*e], pid);
            } else if (auto d = scm.endo_index(pid)) {
                idx = idx * scm.endogenous[*d].range.size() +
                      scm.endogenous[*d].range.index_of(out[*d], pid);
            } else {
                throw StructuralError("equation for '" + var.id + "' names unknown parent '" + pid + "'");
            }
        }
        out[k] = eq.table[idx];
    }
    return out;
}

Distribution pushforward(const FiniteScm& scm, const Intervention& i) {
    Distribution dist;
    ProductSpace space = scm.exo_space();
    if (scm.prior.size() != space.size()) {
        throw StructuralError("prior does not cover the exogenous space");
    }
    for (std::size_t at = 0; at < space.size(); ++at) {
        const Rational& p = scm.prior[at];
        if (p.is_zero()) continue;
        auto digits = space.digits(at);
        std::vector<Value> u(digits.size());
        for (std::size_t k = 0; k < digits.size(); ++k) {
            u[k] = scm.exogenous[k].range.values[digits[k]];
        }
        dist[solve(scm, u, i)] += p;
    }
    return dist;
}

FiniteScm intervene(const FiniteScm& scm, const Intervention& i) {
    FiniteScm out = scm;
    for (const auto& [id, v] : i.targets) {
        auto k = out.endo_index(id);
        if (!k) {
            throw DomainError("intervention targets non-endogenous '" + id + "'");
        }
        if (!out.endogenous[*k].range.contains(v)) {
            throw DomainError("variable '" + id + "': value " + std::to_string(v) +
                              " not in range");
        }
        out.equations[*k] = Equation{{}, {v}};
    }
    return out;
}

}  // namespace ccabs
