#include "doctest.h"

#include <algorithm>

#include "ccabs/scm.hpp"
#include "support/fixtures.hpp"

using namespace ccabs;

namespace {

bool has_violation(const ValidationReport& report, const std::string& kind) {
    return std::any_of(report.violations.begin(), report.violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
}

Intervention iv(std::initializer_list<std::pair<std::string, Value>> targets) {
    Intervention i;
    for (const auto& [id, v] : targets) i.set(id, v);
    return i;
}

}  // namespace

TEST_CASE("product space indexes tuples with the last position fastest") {
    ProductSpace space({3, 3, 3, 3});
    CHECK(space.size() == 81);
    CHECK(space.rank() == 4);
    CHECK(space.index({0, 0, 0, 0}) == 0);
    CHECK(space.index({0, 0, 0, 1}) == 1);
    CHECK(space.index({0, 0, 1, 0}) == 3);
    CHECK(space.index({1, 0, 0, 0}) == 27);
    for (std::size_t at : {0u, 1u, 40u, 80u}) {
        CHECK(space.index(space.digits(at)) == at);
    }
    ProductSpace empty((std::vector<std::size_t>()));
    CHECK(empty.size() == 1);
    CHECK(empty.digits(0).empty());
}

TEST_CASE("ranges look up positions by value") {
    Range r = span(0, 2);
    CHECK(r.size() == 3);
    CHECK(r.contains(2));
    CHECK_FALSE(r.contains(3));
    CHECK(r.index_of(2, "A") == 2);
    CHECK_THROWS_WITH_AS(r.index_of(7, "A"), "variable 'A': value 7 not in range",
                         DomainError);
}

TEST_CASE("interventions keep targets sorted and compare by agreement") {
    Intervention i;
    i.set("C", 1);
    i.set("A", 2);
    i.set("C", 3);  // overwrite
    CHECK(i.targets.size() == 2);
    CHECK(i.targets[0].first == "A");
    CHECK(i.value_of("C") == 3);
    CHECK_FALSE(i.value_of("B").has_value());
    CHECK(i.str() == "{A<-2, C<-3}");
    CHECK(Intervention::null().str() == "{}");

    Intervention j = iv({{"A", 2}, {"B", 0}, {"C", 3}});
    CHECK(i.weaker_equal(j));
    CHECK_FALSE(j.weaker_equal(i));
    CHECK(Intervention::null().weaker_equal(i));
    CHECK_FALSE(iv({{"A", 1}}).weaker_equal(j));  // same target, other value
}

TEST_CASE("agreement order gives a poset with the null bottom") {
    auto poset = InterventionPoset::with_agreement_order(
        {Intervention::null(), iv({{"A", 0}}), iv({{"A", 0}, {"B", 1}}), iv({{"B", 0}})});
    CHECK(poset.leq(0, 3));
    CHECK(poset.leq(1, 2));
    CHECK_FALSE(poset.leq(2, 1));
    CHECK_FALSE(poset.leq(3, 2));  // B<-0 vs B<-1 disagree
    CHECK(poset.index_of(iv({{"B", 0}})) == 3);
    CHECK_FALSE(poset.index_of(iv({{"B", 2}})).has_value());
}

TEST_CASE("the summing model validates cleanly") {
    auto scm = fixtures::sum_low();
    CHECK(validate(scm).ok());
    CHECK(scm.exo_space().size() == 81);
    CHECK(scm.endo_space().size() == 3 * 3 * 7 * 7);
    auto order = scm.topo_order();
    REQUIRE(order.has_value());
    // A and B precede C and D.
    auto pos = [&](std::size_t var) {
        return std::find(order->begin(), order->end(), var) - order->begin();
    };
    CHECK(pos(0) < pos(2));
    CHECK(pos(1) < pos(2));
    CHECK(pos(0) < pos(3));
}

TEST_CASE("validation names each broken part") {
    auto scm = fixtures::sum_low();

    SUBCASE("duplicate variable id") {
        scm.endogenous.push_back({"A", span(0, 1)});
        scm.equations.push_back({{}, {0}});
        CHECK(has_violation(validate(scm), "duplicate-id"));
    }
    SUBCASE("empty range") {
        scm.endogenous[0].range.values.clear();
        auto report = validate(scm);
        CHECK(has_violation(report, "empty-range"));
    }
    SUBCASE("missing equation") {
        scm.equations.pop_back();
        CHECK(has_violation(validate(scm), "equation-count"));
    }
    SUBCASE("unknown parent") {
        scm.equations[0].parents = {"Z"};
        CHECK(has_violation(validate(scm), "unknown-parent"));
    }
    SUBCASE("wrong table size") {
        scm.equations[0].table.push_back(0);
        CHECK(has_violation(validate(scm), "table-shape"));
    }
    SUBCASE("output outside child range") {
        scm.equations[0].table[0] = 9;
        CHECK(has_violation(validate(scm), "out-of-range"));
    }
    SUBCASE("partial table") {
        scm.equations[0].table[0] = -1;
        CHECK(has_violation(validate(scm), "partial-table"));
    }
    SUBCASE("cycle names its variables") {
        // C and D feed each other.
        scm.equations[2].parents = {"D"};
        scm.equations[2].table = std::vector<Value>(7, 0);
        scm.equations[3].parents = {"C"};
        scm.equations[3].table = std::vector<Value>(7, 0);
        auto report = validate(scm);
        REQUIRE(has_violation(report, "cycle"));
        auto it = std::find_if(report.violations.begin(), report.violations.end(),
                               [](const Violation& v) { return v.kind == "cycle"; });
        CHECK(it->message == "equations form a cycle through {C, D}");
        CHECK_FALSE(scm.topo_order().has_value());
    }
    SUBCASE("prior length") {
        scm.prior.pop_back();
        CHECK(has_violation(validate(scm), "prior-shape"));
    }
    SUBCASE("prior sum reported exactly") {
        scm.prior[0] = Rational(0);
        auto report = validate(scm);
        REQUIRE(has_violation(report, "prior-sum"));
        auto it = std::find_if(report.violations.begin(), report.violations.end(),
                               [](const Violation& v) { return v.kind == "prior-sum"; });
        CHECK(it->message == "prior sums to 80/81, expected 1");
    }
    SUBCASE("negative prior mass") {
        scm.prior[0] = Rational(-1, 81);
        scm.prior[1] = Rational(3, 81);
        CHECK(has_violation(validate(scm), "prior-negative"));
    }
    SUBCASE("intervention on exogenous variable") {
        scm.interventions.members.push_back(iv({{"U1", 0}}));
        scm.interventions = InterventionPoset::with_agreement_order(scm.interventions.members);
        CHECK(has_violation(validate(scm), "intervention-target"));
    }
    SUBCASE("intervention value outside range") {
        scm.interventions.members.push_back(iv({{"A", 9}}));
        scm.interventions = InterventionPoset::with_agreement_order(scm.interventions.members);
        CHECK(has_violation(validate(scm), "intervention-value"));
    }
    SUBCASE("missing null intervention") {
        scm.interventions.members.erase(scm.interventions.members.begin());
        scm.interventions = InterventionPoset::with_agreement_order(scm.interventions.members);
        CHECK(has_violation(validate(scm), "poset-empty"));
    }
    SUBCASE("hand-built relation must be a partial order") {
        auto& poset = scm.interventions;
        poset.relation[0][1] = false;  // drop bottom edge
        CHECK(has_violation(validate(scm), "poset-bottom"));
        poset.relation[1][1] = false;
        CHECK(has_violation(validate(scm), "poset-reflexive"));
        poset = InterventionPoset::with_agreement_order(scm.interventions.members);
        poset.relation[1][2] = true;  // {A,B} <= {C,D} forged: breaks transitivity
        auto report = validate(scm);
        CHECK(has_violation(report, "poset-transitive"));
    }
}

TEST_CASE("solving walks equations in dependency order") {
    auto scm = fixtures::sum_low();
    CHECK(solve(scm, {1, 2, 0, 1}, Intervention::null()) == std::vector<Value>{1, 2, 3, 4});
    CHECK(solve(scm, {2, 2, 2, 2}, Intervention::null()) == std::vector<Value>{2, 2, 6, 6});

    // Forcing A and B rewires what C and D see.
    CHECK(solve(scm, {1, 2, 0, 1}, iv({{"A", 0}, {"B", 0}})) == std::vector<Value>{0, 0, 0, 1});
    // Forcing C leaves D alone.
    CHECK(solve(scm, {1, 2, 0, 1}, iv({{"C", 6}})) == std::vector<Value>{1, 2, 6, 4});

    CHECK_THROWS_AS(solve(scm, {1, 2, 0}, Intervention::null()), DomainError);
    CHECK_THROWS_AS(solve(scm, {1, 2, 0, 9}, Intervention::null()), DomainError);
    CHECK_THROWS_AS(solve(scm, {1, 2, 0, 1}, iv({{"U1", 0}})), DomainError);
    CHECK_THROWS_AS(solve(scm, {1, 2, 0, 1}, iv({{"A", 9}})), DomainError);
}

TEST_CASE("solving a cyclic system is refused") {
    auto scm = fixtures::sum_low();
    scm.equations[2].parents = {"D"};
    scm.equations[2].table = std::vector<Value>(7, 0);
    scm.equations[3].parents = {"C"};
    scm.equations[3].table = std::vector<Value>(7, 0);
    CHECK_THROWS_AS(solve(scm, {0, 0, 0, 0}, Intervention::null()), StructuralError);
}

TEST_CASE("push-forward accumulates exact mass per outcome") {
    auto scm = fixtures::sum_low();
    auto dist = pushforward(scm, Intervention::null());
    // Reachable states are exactly the 81 (a, b, a+b+u3, a+b+u4) combinations.
    CHECK(dist.size() == 81);
    Rational total;
    for (const auto& [state, p] : dist) {
        CHECK(p == Rational(1, 81));
        total += p;
    }
    CHECK(total == Rational(1));
    CHECK(dist.at({1, 2, 3, 4}) == Rational(1, 81));
    CHECK(dist.count({0, 0, 5, 0}) == 0);

    auto forced = pushforward(scm, iv({{"A", 0}, {"B", 0}}));
    // Only u3 and u4 vary the outcome now.
    CHECK(forced.size() == 9);
    CHECK(forced.at({0, 0, 2, 1}) == Rational(1, 9));
}

TEST_CASE("push-forward skips zero-mass points") {
    auto scm = fixtures::copy_chain();
    scm.prior = {Rational(1), Rational(0)};
    auto dist = pushforward(scm, Intervention::null());
    CHECK(dist.size() == 1);
    CHECK(dist.at({0, 0}) == Rational(1));
}

TEST_CASE("intervening replaces equations with constants") {
    auto scm = fixtures::sum_low();
    auto cut = intervene(scm, iv({{"C", 5}}));
    CHECK(cut.equations[2].parents.empty());
    CHECK(cut.equations[2].table == std::vector<Value>{5});
    CHECK(validate(cut).ok());
    // Same semantics as passing the intervention to solve.
    for (std::vector<Value> u : {std::vector<Value>{0, 0, 0, 0}, {1, 2, 0, 1}, {2, 2, 2, 2}}) {
        CHECK(solve(cut, u, Intervention::null()) == solve(scm, u, iv({{"C", 5}})));
    }
    CHECK_THROWS_AS(intervene(scm, iv({{"U1", 0}})), DomainError);
    CHECK_THROWS_AS(intervene(scm, iv({{"C", 9}})), DomainError);
}
