#include "ccabs/cli.hpp"

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccabs/abstraction.hpp"
#include "ccabs/cca.hpp"
#include "ccabs/io.hpp"
#include "ccabs/scm.hpp"
#include "ccabs/search.hpp"

namespace ccabs::cli {
namespace {

using io::json;

// Writes the payload to --out when given, to the stream otherwise.
void deliver(const std::string& payload, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << payload;
    else
        io::write_file(out_path, payload);
}

std::string index_list(const std::vector<std::size_t>& xs) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) os << ", ";
        os << xs[i];
    }
    os << ']';
    return os.str();
}

std::string joined(const std::vector<std::string>& names) {
    std::string s = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) s += ", ";
        s += names[i];
    }
    return s + "}";
}

json log_to_json(const SearchLog& log) {
    json j;
    j["emitted"] = log.emitted;
    j["prefiltered"] = log.prefiltered;
    j["considered"] = log.considered;
    j["budget_exhausted"] = log.budget_exhausted;
    return j;
}

json rules_to_json(const std::vector<DecisionRule>& rules) {
    json arr = json::array();
    for (const DecisionRule& r : rules)
        arr.push_back({{"variable", r.variable}, {"value", r.value}, {"predicted", r.predicted}});
    return arr;
}

json record_to_json(const StepRecord& rec) {
    json j;
    j["row"] = rec.row;
    j["consistent"] = rec.consistent;
    j["flagged"] = rec.consistent ? json(nullptr) : json(rec.flagged);
    j["refit"] = rec.refit;
    j["fit_exhausted"] = rec.fit_exhausted;
    j["installed"] = rec.installed;
    j["score"] = rec.score;
    return j;
}

void print_rules(std::ostream& os, const std::vector<DecisionRule>& rules,
                 const std::string& target) {
    for (const DecisionRule& r : rules)
        os << "  " << r.variable << "=" << r.value << " -> " << target << "=" << r.predicted
           << "\n";
}

int run_validate(const std::string& model_path, const std::string& format,
                 const std::string& out_path, std::ostream& out) {
    FiniteScm scm = io::load_scm(model_path);
    ValidationReport report = validate(scm);
    std::ostringstream payload;
    if (format == "json") {
        json j;
        j["ok"] = report.ok();
        json v = json::array();
        for (const Violation& violation : report.violations)
            v.push_back({{"kind", violation.kind}, {"message", violation.message}});
        j["violations"] = std::move(v);
        payload << j.dump(2) << "\n";
    } else {
        if (report.ok()) payload << "ok\n";
        for (const Violation& violation : report.violations)
            payload << "violation (" << violation.kind << "): " << violation.message << "\n";
    }
    deliver(payload.str(), out_path, out);
    return report.ok() ? kPass : kFail;
}

int run_verify(const std::string& low_path, const std::string& high_path,
               const std::string& abs_path, const std::string& format,
               const std::string& out_path, std::ostream& out) {
    ScmPair pair = make_pair_checked(io::load_scm(low_path), io::load_scm(high_path));
    TauAbstraction abs = io::load_abstraction(abs_path, pair);
    VerificationReport report = verify(pair, abs);
    std::ostringstream payload;
    if (format == "json")
        payload << io::report_to_json(report, pair).dump(2) << "\n";
    else
        payload << io::report_to_text(report, pair);
    deliver(payload.str(), out_path, out);
    return report.pass() ? kPass : kFail;
}

int run_search(const std::string& low_path, const std::string& high_path,
               const SearchOptions& opts, const std::string& format,
               const std::string& out_path, std::ostream& out) {
    ScmPair pair = make_pair_checked(io::load_scm(low_path), io::load_scm(high_path));
    SearchResult result = find_abstraction(pair, opts);
    std::ostringstream payload;
    if (format == "json") {
        json j;
        j["found"] = result.found.has_value();
        if (result.found) {
            j["index"] = result.index;
            j["abstraction"] = io::abstraction_to_json(*result.found, pair);
        } else {
            j["index"] = nullptr;
            j["abstraction"] = nullptr;
        }
        j["log"] = log_to_json(result.log);
        payload << j.dump(2) << "\n";
    } else {
        if (result.found) {
            payload << "found abstraction at index " << result.index << "\n";
            payload << "tau: " << index_list(result.found->tau) << "\n";
            payload << "tauU: " << index_list(result.found->tau_u) << "\n";
            payload << "omega: " << index_list(result.found->omega) << "\n";
        } else {
            payload << "no abstraction found ("
                    << (result.log.budget_exhausted ? "budget exhausted"
                                                    : "search space exhausted")
                    << ")\n";
        }
        payload << "emitted: " << result.log.emitted << "\n";
        payload << "prefiltered: " << result.log.prefiltered << "\n";
        payload << "considered: " << result.log.considered << "\n";
    }
    deliver(payload.str(), out_path, out);
    return result.found ? kPass : kExhausted;
}

int run_cca(const std::string& graph_path, const std::string& base_path,
            const std::string& stream_path, const FitOptions& opts, const std::string& format,
            const std::string& out_path, const std::string& log_path, std::ostream& out) {
    CausalGraph graph = io::load_graph(graph_path);
    DataTable base = io::load_csv(base_path);
    DataTable stream = io::load_csv(stream_path);
    if (stream.columns != base.columns)
        throw StructuralError("cca-run: stream columns do not match base columns");

    CcaState state = make_initial_state(base, graph);
    std::vector<DecisionRule> initial_rules = state.rules;

    std::vector<StepRecord> records;
    std::size_t rows_total = base.rows.size();
    for (const auto& row : stream.rows) {
        records.push_back(step(state, row, opts));
        ++rows_total;
    }

    bool exhausted = false;
    std::size_t revisions = 0;
    for (const StepRecord& rec : records) {
        if (rec.refit) ++revisions;
        if (rec.fit_exhausted) exhausted = true;
    }
    std::vector<std::string> active;
    for (std::size_t c = 0; c < state.columns.size(); ++c)
        if (state.active[c]) active.push_back(state.columns[c]);

    std::ostringstream payload;
    if (format == "json") {
        json j;
        j["columns"] = state.columns;
        j["initial_rules"] = rules_to_json(initial_rules);
        json steps = json::array();
        for (const StepRecord& rec : records) steps.push_back(record_to_json(rec));
        j["steps"] = std::move(steps);
        j["active_columns"] = active;
        j["final_rules"] = rules_to_json(state.rules);
        j["revisions"] = revisions;
        payload << j.dump(2) << "\n";
    } else {
        payload << "columns:";
        for (const std::string& c : state.columns) payload << " " << c;
        payload << "\n";
        payload << "initial rules:\n";
        print_rules(payload, initial_rules, state.target);
        std::size_t seen = base.rows.size();
        for (std::size_t k = 0; k < records.size(); ++k) {
            const StepRecord& rec = records[k];
            ++seen;
            payload << "step " << (k + 1) << ": ";
            if (rec.consistent) {
                payload << "consistent\n";
                continue;
            }
            payload << "inconsistent (" << rec.flagged << "); installed "
                    << joined(rec.installed) << " (score " << rec.score << "/" << seen;
            if (rec.fit_exhausted) payload << ", budget exhausted";
            payload << ")\n";
        }
        payload << "active columns:";
        for (const std::string& c : active) payload << " " << c;
        payload << "\n";
        payload << "final rules:\n";
        print_rules(payload, state.rules, state.target);
        payload << "revisions: " << revisions << "\n";
    }
    deliver(payload.str(), out_path, out);

    if (!log_path.empty()) {
        std::ostringstream lines;
        for (const StepRecord& rec : records) lines << record_to_json(rec).dump() << "\n";
        io::write_file(log_path, lines.str());
    }
    return exhausted ? kExhausted : kPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite structural causal models: validation, abstraction checking and "
                 "search, continual revision from observations",
                 "ccabs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ccabs 0.1.0");

    std::string format = "text";
    std::string out_path;
    // Shared display options live on each subcommand so they can follow it.
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
        sub->add_option("--out", out_path, "write output to this file instead of stdout");
    };

    std::string model_path;
    CLI::App* cmd_validate = app.add_subcommand(
        "validate", "check one model file and report every structural violation");
    cmd_validate->add_option("model", model_path, "model JSON file")->required();
    add_common(cmd_validate);

    std::string low_path, high_path, abs_path;
    CLI::App* cmd_verify = app.add_subcommand(
        "verify", "check a candidate abstraction between two models");
    cmd_verify->add_option("--low", low_path, "low-level model JSON file")->required();
    cmd_verify->add_option("--high", high_path, "high-level model JSON file")->required();
    cmd_verify->add_option("--abs", abs_path, "abstraction JSON file")->required();
    add_common(cmd_verify);

    SearchOptions sopts;
    std::string mode = "partition";
    CLI::App* cmd_search = app.add_subcommand(
        "search", "enumerate candidate maps and return the first abstraction that checks out");
    cmd_search->add_option("--low", low_path, "low-level model JSON file")->required();
    cmd_search->add_option("--high", high_path, "high-level model JSON file")->required();
    cmd_search->add_option("--mode", mode, "candidate generator")
        ->check(CLI::IsMember({"partition", "table"}))
        ->capture_default_str();
    cmd_search->add_option("--budget", sopts.budget, "max candidates to generate or prefilter")
        ->capture_default_str();
    cmd_search->add_option("--table-cap", sopts.table_cap,
                           "largest per-group table family to enumerate")
        ->capture_default_str();
    cmd_search->add_option("--threads", sopts.threads, "verification worker threads")
        ->capture_default_str();
    add_common(cmd_search);

    FitOptions fopts;
    std::string graph_path, base_path, stream_path, log_path;
    CLI::App* cmd_cca = app.add_subcommand(
        "cca-run", "fit a model from intake data, then revise it over an observation stream");
    cmd_cca->add_option("--graph", graph_path, "hypothesised structure JSON file")->required();
    cmd_cca->add_option("--base", base_path, "intake observations CSV")->required();
    cmd_cca->add_option("--stream", stream_path, "follow-up observations CSV")->required();
    cmd_cca->add_option("--budget", fopts.budget, "max refit candidates to score")
        ->capture_default_str();
    cmd_cca->add_option("--table-cap", fopts.table_cap,
                        "largest per-group table family during refits")
        ->capture_default_str();
    cmd_cca->add_option("--log", log_path, "append one JSON step record per line to this file");
    add_common(cmd_cca);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kPass : kBadInput;
    }

    try {
        if (*cmd_validate) return run_validate(model_path, format, out_path, out);
        if (*cmd_verify)
            return run_verify(low_path, high_path, abs_path, format, out_path, out);
        if (*cmd_search) {
            sopts.mode = mode == "table" ? SearchMode::table : SearchMode::partition;
            return run_search(low_path, high_path, sopts, format, out_path, out);
        }
        if (*cmd_cca)
            return run_cca(graph_path, base_path, stream_path, fopts, format, out_path,
                           log_path, out);
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace ccabs::cli
