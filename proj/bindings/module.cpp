// Python bindings. Structured inputs and outputs cross the boundary as JSON
// text in the same schemas the CLI and file loaders use; the Python package
// wrapper (python/ccabs/__init__.py) turns them into plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ccabs/abstraction.hpp"
#include "ccabs/cca.hpp"
#include "ccabs/io.hpp"
#include "ccabs/rational.hpp"
#include "ccabs/scm.hpp"
#include "ccabs/search.hpp"

namespace py = pybind11;

namespace {

using ccabs::io::json;

ccabs::FiniteScm model_from(const std::string& text) {
    return ccabs::io::scm_from_json(ccabs::io::parse_json(text, "model"));
}

ccabs::Intervention intervention_from(const std::string& text) {
    return ccabs::io::intervention_from_json(ccabs::io::parse_json(text, "intervention"),
                                             "intervention");
}

ccabs::SearchOptions search_options(const std::string& mode, std::size_t budget,
                                    std::size_t table_cap, std::size_t threads) {
    if (mode != "partition" && mode != "table")
        throw ccabs::StructuralError("search: unknown mode '" + mode + "'");
    ccabs::SearchOptions opts;
    opts.mode = mode == "table" ? ccabs::SearchMode::table : ccabs::SearchMode::partition;
    opts.budget = budget;
    opts.table_cap = table_cap;
    opts.threads = threads;
    return opts;
}

json log_json(const ccabs::SearchLog& log) {
    return json{{"emitted", log.emitted},
                {"prefiltered", log.prefiltered},
                {"considered", log.considered},
                {"budget_exhausted", log.budget_exhausted}};
}

json rules_json(const std::vector<ccabs::DecisionRule>& rules) {
    json arr = json::array();
    for (const ccabs::DecisionRule& r : rules)
        arr.push_back({{"variable", r.variable}, {"value", r.value}, {"predicted", r.predicted}});
    return arr;
}

json map_json(const ccabs::ColumnMap& map) {
    json arr = json::array();
    for (const ccabs::ColumnGroup& g : map.groups)
        arr.push_back({{"variable", g.variable},
                       {"columns", g.columns},
                       {"table", g.table},
                       {"descriptor", g.descriptor}});
    return arr;
}

json record_json(const ccabs::StepRecord& rec) {
    return json{{"row", rec.row},
                {"consistent", rec.consistent},
                {"flagged", rec.consistent ? json(nullptr) : json(rec.flagged)},
                {"refit", rec.refit},
                {"fit_exhausted", rec.fit_exhausted},
                {"installed", rec.installed},
                {"score", rec.score}};
}

std::string py_validate(const std::string& model) {
    ccabs::ValidationReport report = ccabs::validate(model_from(model));
    json out;
    out["ok"] = report.ok();
    json violations = json::array();
    for (const ccabs::Violation& v : report.violations)
        violations.push_back({{"kind", v.kind}, {"message", v.message}});
    out["violations"] = std::move(violations);
    return out.dump();
}

std::vector<ccabs::Value> py_solve(const std::string& model, const std::vector<ccabs::Value>& u,
                                   const std::string& intervention) {
    return ccabs::solve(model_from(model), u, intervention_from(intervention));
}

std::string py_pushforward(const std::string& model, const std::string& intervention) {
    ccabs::Distribution dist =
        ccabs::pushforward(model_from(model), intervention_from(intervention));
    json out = json::array();
    for (const auto& [state, mass] : dist)
        out.push_back({{"state", state}, {"mass", mass.str()}});
    return out.dump();
}

std::string py_verify(const std::string& low, const std::string& high,
                      const std::string& abstraction) {
    ccabs::ScmPair pair = ccabs::make_pair_checked(model_from(low), model_from(high));
    ccabs::TauAbstraction abs = ccabs::io::abstraction_from_json(
        ccabs::io::parse_json(abstraction, "abstraction"), pair);
    return ccabs::io::report_to_json(ccabs::verify(pair, abs), pair).dump();
}

std::string py_find_abstraction(const std::string& low, const std::string& high,
                                const std::string& mode, std::size_t budget,
                                std::size_t table_cap, std::size_t threads) {
    ccabs::ScmPair pair = ccabs::make_pair_checked(model_from(low), model_from(high));
    ccabs::SearchResult result =
        ccabs::find_abstraction(pair, search_options(mode, budget, table_cap, threads));
    json out;
    out["found"] = result.found.has_value();
    if (result.found) {
        out["index"] = result.index;
        out["abstraction"] = ccabs::io::abstraction_to_json(*result.found, pair);
    } else {
        out["index"] = nullptr;
        out["abstraction"] = nullptr;
    }
    out["log"] = log_json(result.log);
    return out.dump();
}

std::string py_fit_high_level(const std::string& data_csv, const std::string& cause,
                              const std::string& target, std::size_t budget,
                              std::size_t table_cap) {
    ccabs::DataTable data = ccabs::io::table_from_csv(data_csv, "data");
    ccabs::FitOptions opts;
    opts.budget = budget;
    opts.table_cap = table_cap;
    ccabs::FitResult fit = ccabs::fit_high_level(data, cause, target, opts);
    json out;
    out["score"] = fit.score;
    out["index"] = fit.index;
    out["budget_exhausted"] = fit.budget_exhausted;
    out["candidates"] = fit.log.size();
    out["model"] = ccabs::io::scm_to_json(fit.model);
    out["map"] = map_json(fit.map);
    out["rules"] = rules_json(ccabs::extract_rules(fit.model, target));
    return out.dump();
}

std::string py_cca_run(const std::string& graph, const std::string& base_csv,
                       const std::string& stream_csv, std::size_t budget,
                       std::size_t table_cap) {
    ccabs::CausalGraph g =
        ccabs::io::graph_from_json(ccabs::io::parse_json(graph, "graph"));
    ccabs::DataTable base = ccabs::io::table_from_csv(base_csv, "base");
    ccabs::DataTable stream = ccabs::io::table_from_csv(stream_csv, "stream");
    if (stream.columns != base.columns)
        throw ccabs::StructuralError("cca: stream columns do not match base columns");

    ccabs::FitOptions opts;
    opts.budget = budget;
    opts.table_cap = table_cap;
    ccabs::CcaState state = ccabs::make_initial_state(base, g);

    json out;
    out["columns"] = state.columns;
    out["initial_rules"] = rules_json(state.rules);
    json steps = json::array();
    std::size_t revisions = 0;
    for (const auto& row : stream.rows) {
        ccabs::StepRecord rec = ccabs::step(state, row, opts);
        if (rec.refit) ++revisions;
        steps.push_back(record_json(rec));
    }
    out["steps"] = std::move(steps);
    json active = json::array();
    for (std::size_t c = 0; c < state.columns.size(); ++c)
        if (state.active[c]) active.push_back(state.columns[c]);
    out["active_columns"] = std::move(active);
    out["final_rules"] = rules_json(state.rules);
    out["revisions"] = revisions;
    out["model"] = ccabs::io::scm_to_json(state.model);
    out["map"] = map_json(state.map);
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite structural causal models: validation, abstraction verification "
              "and search, continual revision";

    auto structural = py::register_exception<ccabs::StructuralError>(m, "StructuralError");
    py::register_exception<ccabs::DomainError>(m, "DomainError", structural);
    py::register_exception<ccabs::CapacityError>(m, "CapacityError", structural);
    py::register_exception<ccabs::ArithmeticError>(m, "RationalError");

    m.def("validate_scm", &py_validate, py::arg("model"),
          "Validate a model given as JSON text; returns a JSON report.");
    m.def("solve", &py_solve, py::arg("model"), py::arg("u"), py::arg("intervention"),
          "Evaluate the model at an exogenous point under an intervention.");
    m.def("pushforward", &py_pushforward, py::arg("model"), py::arg("intervention"),
          "Exact distribution over endogenous assignments as JSON text.");
    m.def("verify", &py_verify, py::arg("low"), py::arg("high"), py::arg("abstraction"),
          "Run all four abstraction checks; returns the JSON report.");
    m.def("find_abstraction", &py_find_abstraction, py::arg("low"), py::arg("high"),
          py::arg("mode"), py::arg("budget"), py::arg("table_cap"), py::arg("threads"),
          "Search for the first verifying abstraction in enumeration order.");
    m.def("fit_high_level", &py_fit_high_level, py::arg("data_csv"), py::arg("cause"),
          py::arg("target"), py::arg("budget"), py::arg("table_cap"),
          "Fit the best mediator merge for a cause/target pair from CSV data.");
    m.def("cca_run", &py_cca_run, py::arg("graph"), py::arg("base_csv"),
          py::arg("stream_csv"), py::arg("budget"), py::arg("table_cap"),
          "Fit from intake data, then revise over a stream; returns the session JSON.");
}
