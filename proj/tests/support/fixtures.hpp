#pragma once

// Shared model builders for tests and the fixture generator. The summing
// pair lives on two grids: umax = 2 is the 81-point space all exhaustive
// checks run on, umax = 3 widens every range so the (2,3,1,1) hand-worked
// diagram is representable.

#include <string>
#include <vector>

#include "ccabs/abstraction.hpp"
#include "ccabs/scm.hpp"

namespace fixtures {

// Low model: A = U1, B = U2, C = A+B+U3, D = A+B+U4 with U_i in {0..umax},
// uniform prior, and interventions {}, (A,B), (C,D), (A,B,C,D).
ccabs::FiniteScm sum_low(int umax = 2);

// High model: X = V1, Y = 2X+V2 with V1, V2 in {0..2*umax}; the prior is the
// image of the uniform low prior under (U1+U2, U3+U4). Interventions {},
// X, Y, (X,Y).
ccabs::FiniteScm sum_high(int umax = 2);

// tau = (A+B, C+D), tauU = (U1+U2, U3+U4), omega maps each low intervention
// to the corresponding sum-valued high intervention.
ccabs::TauAbstraction sum_abs(int umax = 2);

// Same maps computed against explicit models, for mutants whose spaces have
// different dimensions than sum_high's.
ccabs::TauAbstraction sum_abs_for(const ccabs::FiniteScm& low, const ccabs::FiniteScm& high);

ccabs::ScmPair sum_pair(int umax = 2);

// Mutants, each breaking exactly one verification condition on the grid pair.
ccabs::FiniteScm mutant_high_extra_value();     // Y gains value 13: tau misses it
ccabs::FiniteScm mutant_high_shifted_prior();   // 1/81 moved between two points
ccabs::TauAbstraction mutant_abs_swapped_points();  // tauU swapped at two points

// One-variable constant models whose two interventions coincide; the swapped
// omega is surjective and commutes but inverts the order.
ccabs::ScmPair constant_pair();
ccabs::TauAbstraction constant_abs_swapped_omega();

// U1 uniform over {0,1}; A = U1, B = A. Only the diagonal is reachable.
ccabs::FiniteScm copy_chain();

// Two binary endogenous variables against one (4 -> 2 surjections).
ccabs::ScmPair two_to_one_pair();

// XOR-driven low model reaching all four states against a constant high
// model; no surjective map can commute.
ccabs::ScmPair incompatible_pair();

// Columns DP, HL, LL, TC, HD.
std::vector<std::string> diet_columns();
std::vector<std::vector<int>> diet_base_rows();    // two intake rows
std::vector<std::vector<int>> diet_stream_rows();  // the contradicting row
std::vector<std::vector<int>> diet_followup_rows();  // consistent after revision

}  // namespace fixtures
