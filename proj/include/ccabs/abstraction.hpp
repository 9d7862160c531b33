#pragma once

#include <optional>
#include <vector>

#include "ccabs/scm.hpp"

namespace ccabs {

// Low-level and high-level models, each carrying its admissible
// interventions. Construct with make_pair_checked to enforce that both
// models validate cleanly.
struct ScmPair {
    FiniteScm low;
    FiniteScm high;
};

ScmPair make_pair_checked(FiniteScm low, FiniteScm high);

// Total map triple between a pair's spaces, stored over canonical indices:
// tau on endogenous joint states, tau_u on exogenous joint points, omega on
// poset member positions. Dimensions are recorded so composition and
// shape checks do not need the models at hand.
struct TauAbstraction {
    std::size_t low_states = 0, high_states = 0;
    std::size_t low_points = 0, high_points = 0;
    std::size_t low_ivs = 0, high_ivs = 0;
    std::vector<std::size_t> tau;
    std::vector<std::size_t> tau_u;
    std::vector<std::size_t> omega;

    friend bool operator==(const TauAbstraction&, const TauAbstraction&) = default;
};

struct SurjectivityCheck {
    struct Part {
        bool pass = true;
        // Codomain indices never hit, in canonical order.
        std::vector<std::size_t> missed;
    };
    Part tau, tau_u, omega;
    bool pass() const { return tau.pass && tau_u.pass && omega.pass; }
};

struct OrderCheck {
    bool pass = true;
    // First comparable low pair whose images are not comparable.
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

struct PushforwardCheck {
    bool pass = true;
    std::optional<std::size_t> witness;  // first failing low intervention
    Distribution mapped_low;             // tau-image of the low push-forward
    Distribution high;                   // high push-forward under omega(i)
};

struct CommutationCheck {
    struct Witness {
        std::size_t u_index = 0;
        std::size_t iv_index = 0;
        std::vector<Value> mapped_low;  // tau(solve(low, u, i))
        std::vector<Value> high;        // solve(high, tau_u(u), omega(i))
    };
    bool pass = true;
    std::optional<Witness> witness;
};

struct VerificationReport {
    SurjectivityCheck surjectivity;
    OrderCheck order;
    PushforwardCheck pushforward;
    CommutationCheck commutation;
    bool pass() const {
        return surjectivity.pass() && order.pass && pushforward.pass && commutation.pass;
    }
};

// Value tuples behind canonical indices.
std::vector<Value> endo_values(const FiniteScm& scm, std::size_t state);
std::vector<Value> exo_values(const FiniteScm& scm, std::size_t point);
std::size_t endo_state_index(const FiniteScm& scm, const std::vector<Value>& values);
std::size_t exo_point_index(const FiniteScm& scm, const std::vector<Value>& values);

// Throws StructuralError when the triple's dimensions do not match the pair.
void require_shape(const ScmPair& pair, const TauAbstraction& abs);

SurjectivityCheck check_surjectivity(const ScmPair& pair, const TauAbstraction& abs);
OrderCheck check_order_preserving(const ScmPair& pair, const TauAbstraction& abs);
PushforwardCheck check_pushforward(const ScmPair& pair, const TauAbstraction& abs);
CommutationCheck check_commutation(const ScmPair& pair, const TauAbstraction& abs);

// Runs all four checks; never short-circuits, so the report always carries
// a verdict for every condition.
VerificationReport verify(const ScmPair& pair, const TauAbstraction& abs);

// Identity triple on a model (tau, tau_u and omega all identity).
TauAbstraction identity_abstraction(const FiniteScm& scm);

// Componentwise composition: first `inner` (low to mid), then `outer`
// (mid to high). Shapes must chain.
TauAbstraction compose(const TauAbstraction& outer, const TauAbstraction& inner);

// tau-image of a distribution over low endogenous states.
Distribution map_distribution(const ScmPair& pair, const TauAbstraction& abs,
                              const Distribution& low_dist);

}  // namespace ccabs
