#include "ccabs/abstraction.hpp"

#include <string>

namespace ccabs {

ScmPair make_pair_checked(FiniteScm low, FiniteScm high) {
    auto low_report = validate(low);
    if (!low_report.ok()) {
        throw StructuralError("low model invalid: " + low_report.violations.front().message);
    }
    auto high_report = validate(high);
    if (!high_report.ok()) {
        throw StructuralError("high model invalid: " + high_report.violations.front().message);
    }
    return ScmPair{std::move(low), std::move(high)};
}

std::vector<Value> endo_values(const FiniteScm& scm, std::size_t state) {
    auto digits = scm.endo_space().digits(state);
    std::vector<Value> out(digits.size());
    for (std::size_t k = 0; k < digits.size(); ++k) {
        out[k] = scm.endogenous[k].range.values[digits[k]];
    }
    return out;
}

std::vector<Value> exo_values(const FiniteScm& scm, std::size_t point) {
    auto digits = scm.exo_space().digits(point);
    std::vector<Value> out(digits.size());
    for (std::size_t k = 0; k < digits.size(); ++k) {
        out[k] = scm.exogenous[k].range.values[digits[k]];
    }
    return out;
}

std::size_t endo_state_index(const FiniteScm& scm, const std::vector<Value>& values) {
    std::vector<std::size_t> digits(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        digits[k] = scm.endogenous[k].range.index_of(values[k], scm.endogenous[k].id);
    }
    return scm.endo_space().index(digits);
}

std::size_t exo_point_index(const FiniteScm& scm, const std::vector<Value>& values) {
    std::vector<std::size_t> digits(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        digits[k] = scm.exogenous[k].range.index_of(values[k], scm.exogenous[k].id);
    }
    return scm.exo_space().index(digits);
}

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw StructuralError(std::string("abstraction shape mismatch: ") + what + " covers " +
                              std::to_string(got) + " of " + std::to_string(want) + " elements");
    }
}

void require_codomain(const std::vector<std::size_t>& table, std::size_t codomain,
                      const char* what) {
    for (std::size_t v : table) {
        if (v >= codomain) {
            throw StructuralError(std::string("abstraction shape mismatch: ") + what +
                                  " maps outside its codomain");
        }
    }
}

}  // namespace

void require_shape(const ScmPair& pair, const TauAbstraction& abs) {
    require_dim(abs.low_states, pair.low.endo_space().size(), "tau");
    require_dim(abs.low_points, pair.low.exo_space().size(), "tauU");
    require_dim(abs.low_ivs, pair.low.interventions.members.size(), "omega");
    require_dim(abs.tau.size(), abs.low_states, "tau");
    require_dim(abs.tau_u.size(), abs.low_points, "tauU");
    require_dim(abs.omega.size(), abs.low_ivs, "omega");
    if (abs.high_states != pair.high.endo_space().size() ||
        abs.high_points != pair.high.exo_space().size() ||
        abs.high_ivs != pair.high.interventions.members.size()) {
        throw StructuralError("abstraction shape mismatch: codomain dimensions differ from pair");
    }
    require_codomain(abs.tau, abs.high_states, "tau");
    require_codomain(abs.tau_u, abs.high_points, "tauU");
    require_codomain(abs.omega, abs.high_ivs, "omega");
}

namespace {

SurjectivityCheck::Part surjectivity_part(const std::vector<std::size_t>& table,
                                          std::size_t codomain) {
    std::vector<bool> hit(codomain, false);
    for (std::size_t v : table) {
        hit[v] = true;
    }
    SurjectivityCheck::Part part;
    for (std::size_t k = 0; k < codomain; ++k) {
        if (!hit[k]) part.missed.push_back(k);
    }
    part.pass = part.missed.empty();
    return part;
}

}  // namespace

SurjectivityCheck check_surjectivity(const ScmPair& pair, const TauAbstraction& abs) {
    require_shape(pair, abs);
    SurjectivityCheck check;
    check.tau = surjectivity_part(abs.tau, abs.high_states);
    check.tau_u = surjectivity_part(abs.tau_u, abs.high_points);
    check.omega = surjectivity_part(abs.omega, abs.high_ivs);
    return check;
}

OrderCheck check_order_preserving(const ScmPair& pair, const TauAbstraction& abs) {
    require_shape(pair, abs);
    OrderCheck check;
    const auto& low = pair.low.interventions;
    const auto& high = pair.high.interventions;
    for (std::size_t a = 0; a < low.members.size() && check.pass; ++a) {
        for (std::size_t b = 0; b < low.members.size(); ++b) {
            if (low.leq(a, b) && !high.leq(abs.omega[a], abs.omega[b])) {
                check.pass = false;
                check.witness = {a, b};
                break;
            }
        }
    }
    return check;
}

Distribution map_distribution(const ScmPair& pair, const TauAbstraction& abs,
                              const Distribution& low_dist) {
    Distribution out;
    for (const auto& [values, p] : low_dist) {
        std::size_t state = endo_state_index(pair.low, values);
        out[endo_values(pair.high, abs.tau[state])] += p;
    }
    return out;
}

PushforwardCheck check_pushforward(const ScmPair& pair, const TauAbstraction& abs) {
    require_shape(pair, abs);
    PushforwardCheck check;
    const auto& members = pair.low.interventions.members;
    for (std::size_t a = 0; a < members.size(); ++a) {
        Distribution mapped = map_distribution(pair, abs, pushforward(pair.low, members[a]));
        Distribution high =
            pushforward(pair.high, pair.high.interventions.members[abs.omega[a]]);
        if (mapped != high) {
            check.pass = false;
            check.witness = a;
            check.mapped_low = std::move(mapped);
            check.high = std::move(high);
            return check;
        }
    }
    return check;
}

CommutationCheck check_commutation(const ScmPair& pair, const TauAbstraction& abs) {
    require_shape(pair, abs);
    CommutationCheck check;
    const auto& members = pair.low.interventions.members;
    for (std::size_t p = 0; p < abs.low_points; ++p) {
        std::vector<Value> u = exo_values(pair.low, p);
        std::vector<Value> high_u = exo_values(pair.high, abs.tau_u[p]);
        for (std::size_t a = 0; a < members.size(); ++a) {
            std::vector<Value> low_out = solve(pair.low, u, members[a]);
            std::vector<Value> mapped =
                endo_values(pair.high, abs.tau[endo_state_index(pair.low, low_out)]);
            std::vector<Value> high_out =
                solve(pair.high, high_u, pair.high.interventions.members[abs.omega[a]]);
            if (mapped != high_out) {
                check.pass = false;
                check.witness = CommutationCheck::Witness{p, a, mapped, high_out};
                return check;
            }
        }
    }
    return check;
}

VerificationReport verify(const ScmPair& pair, const TauAbstraction& abs) {
    VerificationReport report;
    report.surjectivity = check_surjectivity(pair, abs);
    report.order = check_order_preserving(pair, abs);
    report.pushforward = check_pushforward(pair, abs);
    report.commutation = check_commutation(pair, abs);
    return report;
}

TauAbstraction identity_abstraction(const FiniteScm& scm) {
    TauAbstraction abs;
    abs.low_states = abs.high_states = scm.endo_space().size();
    abs.low_points = abs.high_points = scm.exo_space().size();
    abs.low_ivs = abs.high_ivs = scm.interventions.members.size();
    abs.tau.resize(abs.low_states);
    abs.tau_u.resize(abs.low_points);
    abs.omega.resize(abs.low_ivs);
    for (std::size_t k = 0; k < abs.tau.size(); ++k) abs.tau[k] = k;
    for (std::size_t k = 0; k < abs.tau_u.size(); ++k) abs.tau_u[k] = k;
    for (std::size_t k = 0; k < abs.omega.size(); ++k) abs.omega[k] = k;
    return abs;
}

TauAbstraction compose(const TauAbstraction& outer, const TauAbstraction& inner) {
    if (inner.high_states != outer.low_states || inner.high_points != outer.low_points ||
        inner.high_ivs != outer.low_ivs) {
        throw StructuralError("compose: inner codomain does not match outer domain");
    }
    TauAbstraction out;
    out.low_states = inner.low_states;
    out.low_points = inner.low_points;
    out.low_ivs = inner.low_ivs;
    out.high_states = outer.high_states;
    out.high_points = outer.high_points;
    out.high_ivs = outer.high_ivs;
    out.tau.reserve(inner.tau.size());
    for (std::size_t v : inner.tau) out.tau.push_back(outer.tau[v]);
    out.tau_u.reserve(inner.tau_u.size());
    for (std::size_t v : inner.tau_u) out.tau_u.push_back(outer.tau_u[v]);
    out.omega.reserve(inner.omega.size());
    for (std::size_t v : inner.omega) out.omega.push_back(outer.omega[v]);
    return out;
}

}  // namespace ccabs
