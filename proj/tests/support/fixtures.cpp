#include "fixtures.hpp"

#include <functional>
#include <utility>

using ccabs::Equation;
using ccabs::FiniteScm;
using ccabs::Intervention;
using ccabs::InterventionPoset;
using ccabs::Range;
using ccabs::Rational;
using ccabs::ScmPair;
using ccabs::TauAbstraction;
using ccabs::Value;
using ccabs::Variable;
using ccabs::span;

namespace fixtures {

namespace {

// Table for child = f(parent values), parents iterated last-fastest.
std::vector<Value> tabulate(const std::vector<Range>& parents,
                            const std::function<Value(const std::vector<Value>&)>& f) {
    std::vector<std::size_t> sizes;
    for (const auto& r : parents) sizes.push_back(r.size());
    ccabs::ProductSpace space(sizes);
    std::vector<Value> table(space.size());
    for (std::size_t at = 0; at < space.size(); ++at) {
        auto digits = space.digits(at);
        std::vector<Value> args(digits.size());
        for (std::size_t k = 0; k < digits.size(); ++k) {
            args[k] = parents[k].values[digits[k]];
        }
        table[at] = f(args);
    }
    return table;
}

Intervention iv(std::vector<std::pair<std::string, Value>> targets) {
    Intervention i;
    for (auto& [id, v] : targets) i.set(id, v);
    return i;
}

}  // namespace

FiniteScm sum_low(int umax) {
    FiniteScm scm;
    Range u = span(0, umax);
    Range ab = span(0, umax);
    Range cd = span(0, 3 * umax);
    scm.exogenous = {{"U1", u}, {"U2", u}, {"U3", u}, {"U4", u}};
    scm.endogenous = {{"A", ab}, {"B", ab}, {"C", cd}, {"D", cd}};
    scm.equations = {
        Equation{{"U1"}, tabulate({u}, [](const auto& a) { return a[0]; })},
        Equation{{"U2"}, tabulate({u}, [](const auto& a) { return a[0]; })},
        Equation{{"A", "B", "U3"}, tabulate({ab, ab, u}, [](const auto& a) { return a[0] + a[1] + a[2]; })},
        Equation{{"A", "B", "U4"}, tabulate({ab, ab, u}, [](const auto& a) { return a[0] + a[1] + a[2]; })},
    };
    std::size_t points = scm.exo_space().size();
    scm.prior.assign(points, Rational(1, static_cast<std::int64_t>(points)));

    std::vector<Intervention> members{Intervention::null()};
    for (Value a : ab.values)
        for (Value b : ab.values) members.push_back(iv({{"A", a}, {"B", b}}));
    for (Value c : cd.values)
        for (Value d : cd.values) members.push_back(iv({{"C", c}, {"D", d}}));
    for (Value a : ab.values)
        for (Value b : ab.values)
            for (Value c : cd.values)
                for (Value d : cd.values)
                    members.push_back(iv({{"A", a}, {"B", b}, {"C", c}, {"D", d}}));
    scm.interventions = InterventionPoset::with_agreement_order(std::move(members));
    return scm;
}

FiniteScm sum_high(int umax) {
    FiniteScm scm;
    Range v = span(0, 2 * umax);
    Range x = span(0, 2 * umax);
    Range y = span(0, 6 * umax);
    scm.exogenous = {{"V1", v}, {"V2", v}};
    scm.endogenous = {{"X", x}, {"Y", y}};
    scm.equations = {
        Equation{{"V1"}, tabulate({v}, [](const auto& a) { return a[0]; })},
        Equation{{"X", "V2"}, tabulate({x, v}, [](const auto& a) { return 2 * a[0] + a[1]; })},
    };
    // Image of the uniform low prior under (U1+U2, U3+U4): the two sums are
    // independent, each with pair counts over {0..umax}^2.
    std::vector<std::int64_t> counts(2 * umax + 1, 0);
    for (int a = 0; a <= umax; ++a)
        for (int b = 0; b <= umax; ++b) ++counts[a + b];
    std::int64_t base = (umax + 1) * (umax + 1);
    scm.prior.clear();
    for (Value v1 : v.values)
        for (Value v2 : v.values)
            scm.prior.push_back(Rational(counts[v1] * counts[v2], base * base));

    std::vector<Intervention> members{Intervention::null()};
    for (Value xv : x.values) members.push_back(iv({{"X", xv}}));
    for (Value yv : y.values) members.push_back(iv({{"Y", yv}}));
    for (Value xv : x.values)
        for (Value yv : y.values) members.push_back(iv({{"X", xv}, {"Y", yv}}));
    scm.interventions = InterventionPoset::with_agreement_order(std::move(members));
    return scm;
}

TauAbstraction sum_abs(int umax) {
    return sum_abs_for(sum_low(umax), sum_high(umax));
}

TauAbstraction sum_abs_for(const FiniteScm& low, const FiniteScm& high) {
    TauAbstraction abs;
    abs.low_states = low.endo_space().size();
    abs.high_states = high.endo_space().size();
    abs.low_points = low.exo_space().size();
    abs.high_points = high.exo_space().size();
    abs.low_ivs = low.interventions.members.size();
    abs.high_ivs = high.interventions.members.size();

    abs.tau.resize(abs.low_states);
    for (std::size_t s = 0; s < abs.low_states; ++s) {
        auto v = ccabs::endo_values(low, s);
        abs.tau[s] = ccabs::endo_state_index(high, {v[0] + v[1], v[2] + v[3]});
    }
    abs.tau_u.resize(abs.low_points);
    for (std::size_t p = 0; p < abs.low_points; ++p) {
        auto u = ccabs::exo_values(low, p);
        abs.tau_u[p] = ccabs::exo_point_index(high, {u[0] + u[1], u[2] + u[3]});
    }
    abs.omega.resize(abs.low_ivs);
    for (std::size_t a = 0; a < abs.low_ivs; ++a) {
        const Intervention& i = low.interventions.members[a];
        Intervention image;
        if (auto av = i.value_of("A")) {
            image.set("X", *av + *i.value_of("B"));
        }
        if (auto cv = i.value_of("C")) {
            image.set("Y", *cv + *i.value_of("D"));
        }
        abs.omega[a] = *high.interventions.index_of(image);
    }
    return abs;
}

ScmPair sum_pair(int umax) { return ScmPair{sum_low(umax), sum_high(umax)}; }

FiniteScm mutant_high_extra_value() {
    FiniteScm high = sum_high();
    high.endogenous[1].range.values.push_back(13);
    // X and V2 ranges are unchanged, so the Y table keeps its shape; only the
    // codomain grew. The interventions stay as they were, leaving (x, 13)
    // states unreachable by tau.
    return high;
}

FiniteScm mutant_high_shifted_prior() {
    FiniteScm high = sum_high();
    // Move 1/81 of mass from the first point (V1,V2) = (0,0) to (0,1).
    high.prior[0] -= Rational(1, 81);
    high.prior[1] += Rational(1, 81);
    return high;
}

TauAbstraction mutant_abs_swapped_points() {
    TauAbstraction abs = sum_abs();
    std::swap(abs.tau_u[0], abs.tau_u[1]);
    return abs;
}

namespace {

FiniteScm constant_model(const std::string& exo, const std::string& endo) {
    FiniteScm scm;
    scm.exogenous = {{exo, Range{{0}}}};
    scm.endogenous = {{endo, Range{{0}}}};
    scm.equations = {Equation{{}, {0}}};
    scm.prior = {Rational(1)};
    scm.interventions = InterventionPoset::with_agreement_order(
        {Intervention::null(), iv({{endo, 0}})});
    return scm;
}

}  // namespace

ScmPair constant_pair() {
    return ScmPair{constant_model("W", "A"), constant_model("V", "X")};
}

TauAbstraction constant_abs_swapped_omega() {
    ScmPair pair = constant_pair();
    TauAbstraction abs = identity_abstraction(pair.low);
    // Both interventions force the same outcome, so swapping them preserves
    // every distribution and every solve, but {} now maps above X<-0.
    std::swap(abs.omega[0], abs.omega[1]);
    return abs;
}

FiniteScm copy_chain() {
    FiniteScm scm;
    Range bit = span(0, 1);
    scm.exogenous = {{"U1", bit}};
    scm.endogenous = {{"A", bit}, {"B", bit}};
    scm.equations = {
        Equation{{"U1"}, {0, 1}},
        Equation{{"A"}, {0, 1}},
    };
    scm.prior = {Rational(1, 2), Rational(1, 2)};
    scm.interventions = InterventionPoset::with_agreement_order({Intervention::null()});
    return scm;
}

ScmPair two_to_one_pair() {
    FiniteScm low;
    Range bit = span(0, 1);
    low.exogenous = {{"U1", bit}};
    low.endogenous = {{"A", bit}, {"B", bit}};
    low.equations = {Equation{{"U1"}, {0, 1}}, Equation{{"U1"}, {0, 1}}};
    low.prior = {Rational(1, 2), Rational(1, 2)};
    low.interventions = InterventionPoset::with_agreement_order({Intervention::null()});

    FiniteScm high;
    high.exogenous = {{"V1", Range{{0}}}};
    high.endogenous = {{"X", bit}};
    high.equations = {Equation{{}, {0}}};
    high.prior = {Rational(1)};
    high.interventions = InterventionPoset::with_agreement_order({Intervention::null()});
    return ScmPair{std::move(low), std::move(high)};
}

ScmPair incompatible_pair() {
    FiniteScm low;
    Range bit = span(0, 1);
    low.exogenous = {{"U1", bit}, {"U2", bit}};
    low.endogenous = {{"A", bit}, {"B", bit}};
    low.equations = {
        Equation{{"U1"}, {0, 1}},
        Equation{{"A", "U2"}, {0, 1, 1, 0}},  // B = A xor U2
    };
    low.prior.assign(4, Rational(1, 4));
    low.interventions = InterventionPoset::with_agreement_order({Intervention::null()});

    FiniteScm high;
    high.exogenous = {{"V1", Range{{0}}}};
    high.endogenous = {{"X", bit}};
    high.equations = {Equation{{}, {0}}};
    high.prior = {Rational(1)};
    high.interventions = InterventionPoset::with_agreement_order({Intervention::null()});
    return ScmPair{std::move(low), std::move(high)};
}

std::vector<std::string> diet_columns() { return {"DP", "HL", "LL", "TC", "HD"}; }

std::vector<std::vector<int>> diet_base_rows() {
    return {
        {1, 0, 0, 0, 0},
        {0, 0, 1, 1, 1},
    };
}

std::vector<std::vector<int>> diet_stream_rows() { return {{0, 1, 0, 1, 0}}; }

std::vector<std::vector<int>> diet_followup_rows() { return {{1, 0, 0, 0, 0}}; }

}  // namespace fixtures
