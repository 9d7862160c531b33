#include "ccabs/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ccabs::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw StructuralError(where + ": " + what);
}

void require_object(const json& j, const std::string& where,
                    const std::vector<std::string>& required,
                    const std::vector<std::string>& optional = {}) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& key : required) {
        if (!j.contains(key)) fail(where, "missing key '" + key + "'");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(required.begin(), required.end(), key) == required.end() &&
            std::find(optional.begin(), optional.end(), key) == optional.end()) {
            fail(where, "unknown key '" + key + "'");
        }
    }
}

const json& member(const json& j, const std::string& key) { return j.at(key); }

Value value_at(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer value");
    return j.get<Value>();
}

std::string string_at(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

const json& array_at(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    return j;
}

std::vector<Value> value_tuple(const json& j, const std::string& where) {
    array_at(j, where);
    std::vector<Value> out;
    for (const auto& e : j) out.push_back(value_at(e, where));
    return out;
}

Rational rational_at(const json& j, const std::string& where) {
    const std::string text = string_at(j, where);
    try {
        return Rational::parse(text);
    } catch (const ArithmeticError& e) {
        fail(where, e.what());
    }
}

std::vector<Variable> variables_from_json(const json& j, const std::string& where) {
    array_at(j, where);
    std::vector<Variable> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string at = where + "[" + std::to_string(k) + "]";
        require_object(j[k], at, {"id", "values"});
        Variable v;
        v.id = string_at(member(j[k], "id"), at + ".id");
        v.range.values = value_tuple(member(j[k], "values"), at + ".values");
        out.push_back(std::move(v));
    }
    return out;
}

json variables_to_json(const std::vector<Variable>& vars) {
    json out = json::array();
    for (const auto& v : vars) {
        out.push_back({{"id", v.id}, {"values", v.range.values}});
    }
    return out;
}

}  // namespace

json parse_json(const std::string& text, const std::string& where) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(where, "not valid JSON");
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot write '" + path + "'");
    out << content;
}

json load_json_file(const std::string& path) { return parse_json(read_file(path), path); }

Intervention intervention_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an intervention object");
    Intervention i;
    for (const auto& [id, v] : j.items()) {
        if (i.value_of(id)) fail(where, "duplicate target '" + id + "'");
        i.set(id, value_at(v, where + "." + id));
    }
    return i;
}

json intervention_to_json(const Intervention& i) {
    json out = json::object();
    for (const auto& [id, v] : i.targets) out[id] = v;
    return out;
}

FiniteScm scm_from_json(const json& j) {
    require_object(j, "scm", {"exogenous", "endogenous", "equations", "prior", "interventions"});
    FiniteScm scm;
    scm.exogenous = variables_from_json(member(j, "exogenous"), "scm.exogenous");
    scm.endogenous = variables_from_json(member(j, "endogenous"), "scm.endogenous");

    const json& eqs = array_at(member(j, "equations"), "scm.equations");
    scm.equations.resize(scm.endogenous.size());
    std::vector<bool> seen(scm.endogenous.size(), false);
    for (std::size_t k = 0; k < eqs.size(); ++k) {
        const std::string at = "scm.equations[" + std::to_string(k) + "]";
        require_object(eqs[k], at, {"target", "parents", "table"});
        const std::string target = string_at(member(eqs[k], "target"), at + ".target");
        auto idx = scm.endo_index(target);
        if (!idx) fail(at, "target '" + target + "' is not an endogenous variable");
        if (seen[*idx]) fail(at, "second equation for '" + target + "'");
        seen[*idx] = true;
        Equation eq;
        for (const auto& p : array_at(member(eqs[k], "parents"), at + ".parents")) {
            eq.parents.push_back(string_at(p, at + ".parents"));
        }
        eq.table = value_tuple(member(eqs[k], "table"), at + ".table");
        scm.equations[*idx] = std::move(eq);
    }
    for (std::size_t k = 0; k < scm.endogenous.size(); ++k) {
        if (!seen[k]) fail("scm.equations", "no equation for '" + scm.endogenous[k].id + "'");
    }

    const json& prior = array_at(member(j, "prior"), "scm.prior");
    for (std::size_t k = 0; k < prior.size(); ++k) {
        scm.prior.push_back(rational_at(prior[k], "scm.prior[" + std::to_string(k) + "]"));
    }

    std::vector<Intervention> members;
    const json& ivs = array_at(member(j, "interventions"), "scm.interventions");
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        members.push_back(
            intervention_from_json(ivs[k], "scm.interventions[" + std::to_string(k) + "]"));
    }
    scm.interventions = InterventionPoset::with_agreement_order(std::move(members));
    return scm;
}

json scm_to_json(const FiniteScm& scm) {
    json j;
    j["exogenous"] = variables_to_json(scm.exogenous);
    j["endogenous"] = variables_to_json(scm.endogenous);
    json eqs = json::array();
    for (std::size_t k = 0; k < scm.equations.size(); ++k) {
        eqs.push_back({{"target", scm.endogenous[k].id},
                       {"parents", scm.equations[k].parents},
                       {"table", scm.equations[k].table}});
    }
    j["equations"] = std::move(eqs);
    json prior = json::array();
    for (const auto& p : scm.prior) prior.push_back(p.str());
    j["prior"] = std::move(prior);
    json ivs = json::array();
    for (const auto& i : scm.interventions.members) ivs.push_back(intervention_to_json(i));
    j["interventions"] = std::move(ivs);
    return j;
}

FiniteScm load_scm(const std::string& path) { return scm_from_json(load_json_file(path)); }

namespace {

// Resolves one extensional map section: every entry is {"in": ..., "out": ...},
// the ins must cover the whole domain exactly once, and the outs must exist.
template <typename ResolveIn, typename ResolveOut>
std::vector<std::size_t> map_from_entries(const json& j, const std::string& where,
                                          std::size_t domain, ResolveIn resolve_in,
                                          ResolveOut resolve_out) {
    array_at(j, where);
    std::vector<std::size_t> table(domain, domain);
    std::vector<bool> seen(domain, false);
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string at = where + "[" + std::to_string(k) + "]";
        require_object(j[k], at, {"in", "out"});
        std::size_t in = resolve_in(member(j[k], "in"), at + ".in");
        if (seen[in]) fail(at, "duplicate entry");
        seen[in] = true;
        table[in] = resolve_out(member(j[k], "out"), at + ".out");
    }
    for (std::size_t k = 0; k < domain; ++k) {
        if (!seen[k]) fail(where, "map does not cover the whole domain");
    }
    return table;
}

std::size_t resolve_state(const FiniteScm& scm, const json& j, const std::string& where) {
    auto values = value_tuple(j, where);
    if (values.size() != scm.endogenous.size()) fail(where, "wrong tuple width");
    try {
        return endo_state_index(scm, values);
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

std::size_t resolve_point(const FiniteScm& scm, const json& j, const std::string& where) {
    auto values = value_tuple(j, where);
    if (values.size() != scm.exogenous.size()) fail(where, "wrong tuple width");
    try {
        return exo_point_index(scm, values);
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

std::size_t resolve_member(const FiniteScm& scm, const json& j, const std::string& where) {
    Intervention i = intervention_from_json(j, where);
    auto idx = scm.interventions.index_of(i);
    if (!idx) fail(where, "intervention " + i.str() + " is not admissible");
    return *idx;
}

}  // namespace

TauAbstraction abstraction_from_json(const json& j, const ScmPair& pair) {
    require_object(j, "abstraction", {"tau", "tauU", "omega"});
    TauAbstraction abs;
    abs.low_states = pair.low.endo_space().size();
    abs.high_states = pair.high.endo_space().size();
    abs.low_points = pair.low.exo_space().size();
    abs.high_points = pair.high.exo_space().size();
    abs.low_ivs = pair.low.interventions.members.size();
    abs.high_ivs = pair.high.interventions.members.size();
    abs.tau = map_from_entries(
        member(j, "tau"), "abstraction.tau", abs.low_states,
        [&](const json& e, const std::string& w) { return resolve_state(pair.low, e, w); },
        [&](const json& e, const std::string& w) { return resolve_state(pair.high, e, w); });
    abs.tau_u = map_from_entries(
        member(j, "tauU"), "abstraction.tauU", abs.low_points,
        [&](const json& e, const std::string& w) { return resolve_point(pair.low, e, w); },
        [&](const json& e, const std::string& w) { return resolve_point(pair.high, e, w); });
    abs.omega = map_from_entries(
        member(j, "omega"), "abstraction.omega", abs.low_ivs,
        [&](const json& e, const std::string& w) { return resolve_member(pair.low, e, w); },
        [&](const json& e, const std::string& w) { return resolve_member(pair.high, e, w); });
    return abs;
}

json abstraction_to_json(const TauAbstraction& abs, const ScmPair& pair) {
    require_shape(pair, abs);
    json j;
    json tau = json::array();
    for (std::size_t s = 0; s < abs.tau.size(); ++s) {
        tau.push_back({{"in", endo_values(pair.low, s)},
                       {"out", endo_values(pair.high, abs.tau[s])}});
    }
    j["tau"] = std::move(tau);
    json tau_u = json::array();
    for (std::size_t p = 0; p < abs.tau_u.size(); ++p) {
        tau_u.push_back({{"in", exo_values(pair.low, p)},
                         {"out", exo_values(pair.high, abs.tau_u[p])}});
    }
    j["tauU"] = std::move(tau_u);
    json omega = json::array();
    for (std::size_t a = 0; a < abs.omega.size(); ++a) {
        omega.push_back(
            {{"in", intervention_to_json(pair.low.interventions.members[a])},
             {"out", intervention_to_json(pair.high.interventions.members[abs.omega[a]])}});
    }
    j["omega"] = std::move(omega);
    return j;
}

TauAbstraction load_abstraction(const std::string& path, const ScmPair& pair) {
    return abstraction_from_json(load_json_file(path), pair);
}

namespace {

json distribution_to_json(const Distribution& dist) {
    json out = json::array();
    for (const auto& [state, mass] : dist) {
        out.push_back({{"state", state}, {"mass", mass.str()}});
    }
    return out;
}

}  // namespace

json report_to_json(const VerificationReport& report, const ScmPair& pair) {
    json j;
    j["pass"] = report.pass();

    json surj;
    surj["pass"] = report.surjectivity.pass();
    json tau_missed = json::array();
    for (std::size_t s : report.surjectivity.tau.missed) {
        tau_missed.push_back(endo_values(pair.high, s));
    }
    surj["tau_missed_states"] = std::move(tau_missed);
    json point_missed = json::array();
    for (std::size_t p : report.surjectivity.tau_u.missed) {
        point_missed.push_back(exo_values(pair.high, p));
    }
    surj["tauU_missed_points"] = std::move(point_missed);
    json omega_missed = json::array();
    for (std::size_t a : report.surjectivity.omega.missed) {
        omega_missed.push_back(intervention_to_json(pair.high.interventions.members[a]));
    }
    surj["omega_missed"] = std::move(omega_missed);
    j["surjectivity"] = std::move(surj);

    json order;
    order["pass"] = report.order.pass;
    if (report.order.witness) {
        auto [a, b] = *report.order.witness;
        order["witness"] = {
            {"weaker", intervention_to_json(pair.low.interventions.members[a])},
            {"stronger", intervention_to_json(pair.low.interventions.members[b])}};
    } else {
        order["witness"] = nullptr;
    }
    j["order_preservation"] = std::move(order);

    json push;
    push["pass"] = report.pushforward.pass;
    if (report.pushforward.witness) {
        push["witness"] = {
            {"intervention",
             intervention_to_json(pair.low.interventions.members[*report.pushforward.witness])},
            {"mapped_low", distribution_to_json(report.pushforward.mapped_low)},
            {"high", distribution_to_json(report.pushforward.high)}};
    } else {
        push["witness"] = nullptr;
    }
    j["pushforward"] = std::move(push);

    json comm;
    comm["pass"] = report.commutation.pass;
    if (report.commutation.witness) {
        const auto& w = *report.commutation.witness;
        comm["witness"] = {
            {"point", exo_values(pair.low, w.u_index)},
            {"intervention", intervention_to_json(pair.low.interventions.members[w.iv_index])},
            {"mapped_low", w.mapped_low},
            {"high", w.high}};
    } else {
        comm["witness"] = nullptr;
    }
    j["commutation"] = std::move(comm);
    return j;
}

namespace {

std::string values_str(const std::vector<Value>& values) {
    std::string out = "(";
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out += ", ";
        out += std::to_string(values[k]);
    }
    return out + ")";
}

}  // namespace

std::string report_to_text(const VerificationReport& report, const ScmPair& pair) {
    std::ostringstream os;
    const auto& surj = report.surjectivity;
    if (surj.pass()) {
        os << "surjectivity: pass\n";
    } else {
        os << "surjectivity: FAIL (";
        bool first = true;
        auto part = [&](const SurjectivityCheck::Part& p, const std::string& name) {
            if (p.pass) return;
            if (!first) os << "; ";
            first = false;
            os << name << " misses " << p.missed.size() << " element"
               << (p.missed.size() == 1 ? "" : "s");
        };
        part(surj.tau, "tau");
        part(surj.tau_u, "tauU");
        part(surj.omega, "omega");
        os << ")\n";
    }

    if (report.order.pass) {
        os << "order-preservation: pass\n";
    } else {
        auto [a, b] = *report.order.witness;
        os << "order-preservation: FAIL ("
           << pair.low.interventions.members[a].str() << " <= "
           << pair.low.interventions.members[b].str() << " but images are not ordered)\n";
    }

    if (report.pushforward.pass) {
        os << "push-forward: pass\n";
    } else {
        os << "push-forward: FAIL (distributions differ under "
           << pair.low.interventions.members[*report.pushforward.witness].str() << ")\n";
    }

    if (report.commutation.pass) {
        os << "commutation: pass\n";
    } else {
        const auto& w = *report.commutation.witness;
        os << "commutation: FAIL (at point " << values_str(exo_values(pair.low, w.u_index))
           << " under " << pair.low.interventions.members[w.iv_index].str() << ": mapped "
           << values_str(w.mapped_low) << " vs high " << values_str(w.high) << ")\n";
    }

    os << "result: " << (report.pass() ? "pass" : "FAIL") << "\n";
    return os.str();
}

DataTable table_from_csv(const std::string& text, const std::string& where) {
    DataTable table;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (header) {
            for (const auto& c : cells) {
                if (c.empty()) fail(where, "empty column name in header");
            }
            std::set<std::string> unique(cells.begin(), cells.end());
            if (unique.size() != cells.size()) fail(where, "duplicate column name in header");
            table.columns = cells;
            header = false;
            continue;
        }
        if (cells.size() != table.columns.size()) {
            fail(where, "line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.columns.size()));
        }
        std::vector<Value> values;
        for (const auto& c : cells) {
            if (c.empty() || c.find_first_not_of("-0123456789") != std::string::npos) {
                fail(where, "line " + std::to_string(line_no) + ": '" + c + "' is not an integer");
            }
            values.push_back(static_cast<Value>(std::stol(c)));
        }
        table.rows.push_back(std::move(values));
    }
    if (header) fail(where, "missing header row");
    return table;
}

std::string table_to_csv(const DataTable& table) {
    std::ostringstream os;
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
        if (k) os << ",";
        os << table.columns[k];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) os << ",";
            os << row[k];
        }
        os << "\n";
    }
    return os.str();
}

DataTable load_csv(const std::string& path) { return table_from_csv(read_file(path), path); }

CausalGraph graph_from_json(const json& j) {
    require_object(j, "graph", {"columns", "cause", "target", "parents"});
    std::vector<std::string> columns;
    for (const auto& c : array_at(member(j, "columns"), "graph.columns")) {
        columns.push_back(string_at(c, "graph.columns"));
    }
    std::set<std::string> known(columns.begin(), columns.end());
    if (known.size() != columns.size()) fail("graph.columns", "duplicate column");

    CausalGraph graph;
    graph.columns = columns;
    graph.cause = string_at(member(j, "cause"), "graph.cause");
    graph.target = string_at(member(j, "target"), "graph.target");
    const json& parents = member(j, "parents");
    if (!parents.is_object()) fail("graph.parents", "expected an object");

    std::set<std::string> modelled{graph.cause, graph.target};
    for (const auto& [var, list] : parents.items()) {
        if (!known.count(var)) fail("graph.parents", "unknown variable '" + var + "'");
        modelled.insert(var);
        for (const auto& p : array_at(list, "graph.parents." + var)) {
            const std::string pid = string_at(p, "graph.parents." + var);
            if (!known.count(pid)) {
                fail("graph.parents." + var, "unknown parent '" + pid + "'");
            }
            modelled.insert(pid);
        }
    }
    for (const auto& name : {graph.cause, graph.target}) {
        if (!known.count(name)) fail("graph", "'" + name + "' is not a column");
    }
    if (graph.cause == graph.target) fail("graph", "cause and target coincide");

    // Store in column order so fitted models enumerate deterministically.
    for (const auto& column : columns) {
        if (!modelled.count(column)) continue;
        std::vector<std::string> list;
        if (parents.contains(column)) {
            for (const auto& p : parents[column]) list.push_back(p.get<std::string>());
        }
        graph.parents.push_back({column, std::move(list)});
    }
    return graph;
}

json graph_to_json(const CausalGraph& graph) {
    json j;
    j["columns"] = graph.columns;
    j["cause"] = graph.cause;
    j["target"] = graph.target;
    json parents = json::object();
    for (const auto& [var, list] : graph.parents) {
        if (!list.empty()) parents[var] = list;
    }
    j["parents"] = std::move(parents);
    return j;
}

CausalGraph load_graph(const std::string& path) { return graph_from_json(load_json_file(path)); }

}  // namespace ccabs::io

namespace ccabs {

std::size_t DataTable::column_index(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) return k;
    }
    throw StructuralError("no column named '" + name + "'");
}

}  // namespace ccabs
