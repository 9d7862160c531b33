#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccabs/data.hpp"
#include "ccabs/scm.hpp"

namespace ccabs {

// ---------------------------------------------------------------------------
// Fitting lookup-table models from binary observational data.

// Builds a model over exactly the variables the graph mentions, in column
// order, all with range {0, 1}. Roots become constants holding the majority
// value of their column; other variables get one table entry per parent
// combination, the majority of the child among matching rows. Ties and
// unseen combinations fall to 0. The model has no exogenous variables, and
// its admissible interventions are the null intervention plus every
// single-variable setting of a non-target variable.
FiniteScm fit_initial_scm(const DataTable& data, const CausalGraph& graph);

// One prediction: forcing `variable` to `value` makes the target come out
// `predicted`.
struct DecisionRule {
    std::string variable;
    Value value = 0;
    Value predicted = 0;
    friend bool operator==(const DecisionRule&, const DecisionRule&) = default;
};

// Solves the model under every single-variable intervention: one rule per
// (non-target variable, range value), variables in model order.
std::vector<DecisionRule> extract_rules(const FiniteScm& scm, const std::string& target);

// ---------------------------------------------------------------------------
// Mapping data columns onto model variables.

// One model variable fed by one or more data columns. The table covers the
// columns' joint bit-space (columns in listed order, last one fastest).
// Merged variables are named by joining their column names with '+'.
struct ColumnGroup {
    std::string variable;
    std::vector<std::string> columns;
    std::vector<Value> table;
    std::string descriptor;  // "proj:<column>", "sum", or "table:v0,v1,..."
    friend bool operator==(const ColumnGroup&, const ColumnGroup&) = default;
};

struct ColumnMap {
    std::vector<ColumnGroup> groups;

    const ColumnGroup* group_for(const std::string& variable) const;
    // Value of `variable` on a row laid out by `columns`. Columns are looked
    // up by name, so the same map serves tables with different layouts.
    Value value_for(const std::string& variable, const std::vector<std::string>& columns,
                    const std::vector<Value>& row) const;
    friend bool operator==(const ColumnMap&, const ColumnMap&) = default;
};

// ---------------------------------------------------------------------------
// Searching for a coarser model once the current one is contradicted.

struct FitOptions {
    // Bounds the number of candidates scored (plus partitions skipped as
    // unmappable).
    std::size_t budget = 1'000'000;
    // Passed through to per-group table enumeration.
    std::size_t table_cap = 16;
};

struct FitCandidate {
    std::vector<std::vector<std::string>> groups;  // column names per mediator
    std::vector<std::string> maps;                 // descriptor per mediator
    std::size_t score = 0;                         // history rows explained
};

struct FitResult {
    FiniteScm model;
    ColumnMap map;
    std::size_t score = 0;
    std::size_t index = 0;  // position of the winner in `log`
    bool budget_exhausted = false;
    std::vector<FitCandidate> log;
};

// Considers every set partition of the non-cause, non-target columns (in
// restricted-growth order) combined with every admissible per-group map.
// Each candidate model has the cause as a root, one mediator per group
// depending on the cause, and the target depending on the mediators (on the
// cause directly when there are none); tables are majority-fitted. A
// candidate's score counts the rows whose observed target matches the target
// equation applied to the observed (mapped) parent values. Ties prefer fewer
// mediators, then the earlier candidate.
FitResult fit_high_level(const DataTable& data, const std::string& cause,
                         const std::string& target, const FitOptions& opts = {});

// ---------------------------------------------------------------------------
// The observe / check / discard / refit loop.

struct ConsistencyVerdict {
    bool consistent = true;
    std::string flagged;  // first variable whose rule the row contradicts
};

struct StepRecord {
    std::vector<Value> row;
    bool consistent = true;
    std::string flagged;
    bool refit = false;
    bool fit_exhausted = false;
    std::vector<std::string> installed;  // mediator ids of the refit model
    std::size_t score = 0;               // history rows the refit model explains
};

struct CcaState {
    std::vector<std::string> columns;  // original data layout
    std::vector<bool> active;          // columns still available to models
    std::string cause, target;
    std::vector<std::vector<Value>> history;  // every accepted row, full width
    FiniteScm model;
    ColumnMap map;
    std::vector<DecisionRule> rules;  // cause rules are withheld: the cause
                                      // is acted on, never predicted from
    std::vector<StepRecord> log;
};

CcaState make_initial_state(const DataTable& data, const CausalGraph& graph);

// Evaluates the rules against one observed row: the first covered variable
// whose predicted target disagrees with the observed target is flagged.
ConsistencyVerdict check_consistency(const CcaState& state, const std::vector<Value>& row);

// Appends the row to the history. On contradiction, deactivates the flagged
// variable's columns, refits over the remaining ones, and installs the new
// model, map and rules.
StepRecord step(CcaState& state, const std::vector<Value>& row, const FitOptions& opts = {});

}  // namespace ccabs
