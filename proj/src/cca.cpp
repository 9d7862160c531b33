#include "ccabs/cca.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "ccabs/search.hpp"

namespace ccabs {
namespace {

const Range& bit_range() {
    static const Range bit{{0, 1}};
    return bit;
}

void require_binary(const DataTable& data, const std::string& where) {
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        for (std::size_t c = 0; c < data.columns.size(); ++c) {
            Value v = data.rows[r][c];
            if (v != 0 && v != 1) {
                std::ostringstream msg;
                msg << where << ": column '" << data.columns[c] << "' row " << (r + 1)
                    << ": value " << v << " is not binary";
                throw StructuralError(msg.str());
            }
        }
    }
}

Value majority(std::size_t zeros, std::size_t ones) { return ones > zeros ? 1 : 0; }

// Null intervention plus every single-variable setting of a non-target
// variable, in variable order.
InterventionPoset actionable_interventions(const std::vector<Variable>& vars,
                                           const std::string& target) {
    std::vector<Intervention> members{Intervention::null()};
    for (const Variable& v : vars) {
        if (v.id == target) continue;
        for (Value w : v.range.values) {
            Intervention i;
            i.set(v.id, w);
            members.push_back(i);
        }
    }
    return InterventionPoset::with_agreement_order(std::move(members));
}

ColumnGroup identity_group(const std::string& column) {
    return ColumnGroup{column, {column}, {0, 1}, "proj:" + column};
}

std::vector<DecisionRule> session_rules(const FiniteScm& model, const std::string& target,
                                        const std::string& cause) {
    std::vector<DecisionRule> rules = extract_rules(model, target);
    std::erase_if(rules, [&](const DecisionRule& r) { return r.variable == cause; });
    return rules;
}

}  // namespace

FiniteScm fit_initial_scm(const DataTable& data, const CausalGraph& graph) {
    if (graph.columns != data.columns)
        throw StructuralError("fit: graph columns do not match data columns");
    require_binary(data, "fit");

    FiniteScm scm;
    for (const auto& [var, parents] : graph.parents) {
        (void)parents;
        scm.endogenous.push_back({var, bit_range()});
    }
    for (const auto& [var, parents] : graph.parents) {
        std::size_t child_at = data.column_index(var);
        std::vector<std::size_t> parent_at;
        for (const std::string& p : parents) parent_at.push_back(data.column_index(p));
        Equation eq;
        eq.parents = parents;
        std::size_t domain = std::size_t{1} << parents.size();
        for (std::size_t combo = 0; combo < domain; ++combo) {
            std::size_t zeros = 0, ones = 0;
            for (const auto& row : data.rows) {
                bool match = true;
                for (std::size_t k = 0; k < parents.size(); ++k) {
                    Value want = (combo >> (parents.size() - 1 - k)) & 1;
                    if (row[parent_at[k]] != want) {
                        match = false;
                        break;
                    }
                }
                if (!match) continue;
                (row[child_at] ? ones : zeros) += 1;
            }
            eq.table.push_back(majority(zeros, ones));
        }
        scm.equations.push_back(std::move(eq));
    }
    scm.prior = {Rational(1)};
    scm.interventions = actionable_interventions(scm.endogenous, graph.target);

    ValidationReport report = validate(scm);
    if (!report.ok()) throw StructuralError("fit: " + report.violations.front().message);
    return scm;
}

std::vector<DecisionRule> extract_rules(const FiniteScm& scm, const std::string& target) {
    std::size_t target_at = scm.endogenous.size();
    for (std::size_t k = 0; k < scm.endogenous.size(); ++k)
        if (scm.endogenous[k].id == target) target_at = k;
    if (target_at == scm.endogenous.size())
        throw StructuralError("rules: no variable named '" + target + "'");

    std::vector<DecisionRule> rules;
    for (const Variable& v : scm.endogenous) {
        if (v.id == target) continue;
        for (Value w : v.range.values) {
            Intervention i;
            i.set(v.id, w);
            rules.push_back({v.id, w, solve(scm, {}, i)[target_at]});
        }
    }
    return rules;
}

const ColumnGroup* ColumnMap::group_for(const std::string& variable) const {
    for (const ColumnGroup& g : groups)
        if (g.variable == variable) return &g;
    return nullptr;
}

Value ColumnMap::value_for(const std::string& variable, const std::vector<std::string>& columns,
                           const std::vector<Value>& row) const {
    const ColumnGroup* g = group_for(variable);
    if (!g) throw StructuralError("column map: no group for variable '" + variable + "'");
    std::size_t idx = 0;
    for (const std::string& col : g->columns) {
        auto at = std::find(columns.begin(), columns.end(), col);
        if (at == columns.end())
            throw StructuralError("column map: no column named '" + col + "'");
        idx = idx * 2 + (row[static_cast<std::size_t>(at - columns.begin())] != 0);
    }
    return g->table[idx];
}

FitResult fit_high_level(const DataTable& data, const std::string& cause,
                         const std::string& target, const FitOptions& opts) {
    if (cause == target) throw StructuralError("fit: cause and target are the same column");
    std::size_t cause_at = data.column_index(cause);
    std::size_t target_at = data.column_index(target);
    require_binary(data, "fit");

    std::vector<std::size_t> pool;
    std::vector<Variable> pool_vars;
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
        if (c == cause_at || c == target_at) continue;
        pool.push_back(c);
        pool_vars.push_back({data.columns[c], bit_range()});
    }

    FitResult res;
    struct Best {
        bool set = false;
        std::size_t score = 0, k = 0, index = 0;
        FiniteScm model;
        ColumnMap map;
    } best;

    // Scores one partition-with-maps candidate and keeps the best.
    auto consider = [&](const std::vector<std::vector<std::size_t>>& groups,
                        const std::vector<const GroupMap*>& chosen) {
        std::size_t k = groups.size();
        std::vector<std::string> ids(k);
        std::vector<std::vector<Value>> med(k);
        for (std::size_t j = 0; j < k; ++j) {
            std::string id;
            for (std::size_t m : groups[j]) {
                if (!id.empty()) id += '+';
                id += data.columns[pool[m]];
            }
            ids[j] = std::move(id);
            med[j].reserve(data.rows.size());
            for (const auto& row : data.rows) {
                std::size_t idx = 0;
                for (std::size_t m : groups[j]) idx = idx * 2 + (row[pool[m]] != 0);
                med[j].push_back(chosen[j]->table[idx]);
            }
        }

        FiniteScm model;
        model.endogenous.push_back({cause, bit_range()});
        for (std::size_t j = 0; j < k; ++j) model.endogenous.push_back({ids[j], bit_range()});
        model.endogenous.push_back({target, bit_range()});

        {
            std::size_t zeros = 0, ones = 0;
            for (const auto& row : data.rows) (row[cause_at] ? ones : zeros) += 1;
            model.equations.push_back(Equation{{}, {majority(zeros, ones)}});
        }
        for (std::size_t j = 0; j < k; ++j) {
            Equation eq;
            eq.parents = {cause};
            for (Value c = 0; c < 2; ++c) {
                std::size_t zeros = 0, ones = 0;
                for (std::size_t r = 0; r < data.rows.size(); ++r) {
                    if (data.rows[r][cause_at] != c) continue;
                    (med[j][r] ? ones : zeros) += 1;
                }
                eq.table.push_back(majority(zeros, ones));
            }
            model.equations.push_back(std::move(eq));
        }
        Equation teq;
        if (k == 0)
            teq.parents = {cause};
        else
            teq.parents = ids;
        std::size_t domain = std::size_t{1} << teq.parents.size();
        for (std::size_t combo = 0; combo < domain; ++combo) {
            std::size_t zeros = 0, ones = 0;
            for (std::size_t r = 0; r < data.rows.size(); ++r) {
                bool match = true;
                for (std::size_t j = 0; j < teq.parents.size(); ++j) {
                    Value want = (combo >> (teq.parents.size() - 1 - j)) & 1;
                    Value have = k == 0 ? data.rows[r][cause_at] : med[j][r];
                    if (have != want) {
                        match = false;
                        break;
                    }
                }
                if (!match) continue;
                (data.rows[r][target_at] ? ones : zeros) += 1;
            }
            teq.table.push_back(majority(zeros, ones));
        }

        std::size_t score = 0;
        for (std::size_t r = 0; r < data.rows.size(); ++r) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < teq.parents.size(); ++j)
                idx = idx * 2 + ((k == 0 ? data.rows[r][cause_at] : med[j][r]) != 0);
            if (teq.table[idx] == data.rows[r][target_at]) ++score;
        }
        model.equations.push_back(std::move(teq));
        model.prior = {Rational(1)};
        model.interventions = actionable_interventions(model.endogenous, target);

        FitCandidate entry;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<std::string> names;
            for (std::size_t m : groups[j]) names.push_back(data.columns[pool[m]]);
            entry.groups.push_back(std::move(names));
            entry.maps.push_back(chosen[j]->descriptor);
        }
        entry.score = score;
        res.log.push_back(std::move(entry));
        std::size_t index = res.log.size() - 1;

        if (!best.set || score > best.score || (score == best.score && k < best.k)) {
            best.set = true;
            best.score = score;
            best.k = k;
            best.index = index;
            best.model = std::move(model);
            ColumnMap map;
            map.groups.push_back(identity_group(cause));
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<std::string> names;
                for (std::size_t m : groups[j]) names.push_back(data.columns[pool[m]]);
                map.groups.push_back(
                    ColumnGroup{ids[j], std::move(names), chosen[j]->table, chosen[j]->descriptor});
            }
            map.groups.push_back(identity_group(target));
            best.map = std::move(map);
        }
    };

    std::size_t charged = 0;
    if (pool.empty()) {
        if (opts.budget == 0)
            res.budget_exhausted = true;
        else
            consider({}, {});
    } else {
        // Restricted growth strings enumerate set partitions in canonical
        // order: position i may only open group max(previous) + 1.
        std::vector<std::size_t> rgs(pool.size(), 0);
        bool more = true;
        while (more) {
            if (charged >= opts.budget) {
                res.budget_exhausted = true;
                break;
            }
            std::size_t k = *std::max_element(rgs.begin(), rgs.end()) + 1;
            std::vector<std::vector<std::size_t>> groups(k);
            for (std::size_t i = 0; i < rgs.size(); ++i) groups[rgs[i]].push_back(i);

            std::vector<std::vector<GroupMap>> families(k);
            bool usable = true;
            for (std::size_t j = 0; j < k; ++j) {
                families[j] = group_map_family(pool_vars, groups[j], bit_range(), opts.table_cap);
                if (families[j].empty()) {
                    usable = false;
                    break;
                }
            }
            if (!usable) {
                ++charged;
            } else {
                std::vector<std::size_t> combo(k, 0);
                bool cont = true;
                while (cont) {
                    if (charged >= opts.budget) {
                        res.budget_exhausted = true;
                        more = false;
                        break;
                    }
                    std::vector<const GroupMap*> chosen(k);
                    for (std::size_t j = 0; j < k; ++j) chosen[j] = &families[j][combo[j]];
                    consider(groups, chosen);
                    ++charged;
                    cont = false;
                    for (std::size_t j = k; j-- > 0;) {
                        if (++combo[j] < families[j].size()) {
                            cont = true;
                            break;
                        }
                        combo[j] = 0;
                    }
                }
            }
            if (!more) break;
            // Advance the restricted growth string.
            more = false;
            for (std::size_t i = rgs.size(); i-- > 1;) {
                std::size_t cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
                if (rgs[i] < cap) {
                    ++rgs[i];
                    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                    more = true;
                    break;
                }
            }
        }
    }

    res.model = std::move(best.model);
    res.map = std::move(best.map);
    res.score = best.score;
    res.index = best.index;
    return res;
}

CcaState make_initial_state(const DataTable& data, const CausalGraph& graph) {
    CcaState state;
    state.columns = data.columns;
    state.active.assign(data.columns.size(), true);
    state.cause = graph.cause;
    state.target = graph.target;
    state.model = fit_initial_scm(data, graph);
    for (const Variable& v : state.model.endogenous)
        state.map.groups.push_back(identity_group(v.id));
    state.rules = session_rules(state.model, state.target, state.cause);
    state.history = data.rows;
    return state;
}

ConsistencyVerdict check_consistency(const CcaState& state, const std::vector<Value>& row) {
    if (row.size() != state.columns.size()) {
        std::ostringstream msg;
        msg << "consistency check: row has " << row.size() << " cells, expected "
            << state.columns.size();
        throw StructuralError(msg.str());
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c] != 0 && row[c] != 1) {
            std::ostringstream msg;
            msg << "consistency check: column '" << state.columns[c] << "': value " << row[c]
                << " is not binary";
            throw StructuralError(msg.str());
        }
    }
    std::size_t target_at =
        std::find(state.columns.begin(), state.columns.end(), state.target) -
        state.columns.begin();
    if (target_at == state.columns.size())
        throw StructuralError("consistency check: no column named '" + state.target + "'");

    for (const Variable& v : state.model.endogenous) {
        bool covered = std::any_of(state.rules.begin(), state.rules.end(),
                                   [&](const DecisionRule& r) { return r.variable == v.id; });
        if (!covered) continue;
        Value w = state.map.value_for(v.id, state.columns, row);
        const DecisionRule* rule = nullptr;
        for (const DecisionRule& r : state.rules)
            if (r.variable == v.id && r.value == w) rule = &r;
        if (!rule) {
            std::ostringstream msg;
            msg << "consistency check: no rule for variable '" << v.id << "' value " << w;
            throw StructuralError(msg.str());
        }
        if (rule->predicted != row[target_at]) return {false, v.id};
    }
    return {true, {}};
}

StepRecord step(CcaState& state, const std::vector<Value>& row, const FitOptions& opts) {
    StepRecord record;
    record.row = row;
    ConsistencyVerdict verdict = check_consistency(state, row);
    state.history.push_back(row);
    if (verdict.consistent) {
        state.log.push_back(record);
        return record;
    }
    record.consistent = false;
    record.flagged = verdict.flagged;

    const ColumnGroup* flagged_group = state.map.group_for(verdict.flagged);
    for (const std::string& col : flagged_group->columns) {
        std::size_t at = std::find(state.columns.begin(), state.columns.end(), col) -
                         state.columns.begin();
        state.active[at] = false;
    }

    DataTable remaining;
    for (std::size_t c = 0; c < state.columns.size(); ++c)
        if (state.active[c]) remaining.columns.push_back(state.columns[c]);
    for (const auto& full : state.history) {
        std::vector<Value> slim;
        for (std::size_t c = 0; c < state.columns.size(); ++c)
            if (state.active[c]) slim.push_back(full[c]);
        remaining.rows.push_back(std::move(slim));
    }

    FitResult fit = fit_high_level(remaining, state.cause, state.target, opts);
    state.model = std::move(fit.model);
    state.map = std::move(fit.map);
    state.rules = session_rules(state.model, state.target, state.cause);

    record.refit = true;
    record.fit_exhausted = fit.budget_exhausted;
    record.score = fit.score;
    for (const Variable& v : state.model.endogenous)
        if (v.id != state.cause && v.id != state.target) record.installed.push_back(v.id);
    state.log.push_back(record);
    return record;
}

}  // namespace ccabs
