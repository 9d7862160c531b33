#include "ccabs/search.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace ccabs {
namespace {

// Joint spaces larger than this are never materialized into group tables.
constexpr std::size_t kJointCap = 65536;
// Upper bound on low->high variable assignment vectors cycled through.
constexpr std::size_t kAssignmentCap = 100'000'000;

bool covers(const std::vector<std::size_t>& table, std::size_t cod) {
    std::vector<bool> hit(cod, false);
    for (std::size_t v : table) hit[v] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::optional<std::size_t> find_value(const Range& r, Value v) {
    for (std::size_t k = 0; k < r.values.size(); ++k)
        if (r.values[k] == v) return k;
    return std::nullopt;
}

// base^exp <= cap, without overflow.
bool pow_within(std::size_t base, std::size_t exp, std::size_t cap) {
    if (exp == 0 || base == 1) return cap >= 1;
    if (base == 0) return true;
    std::size_t acc = 1;
    for (std::size_t e = 0; e < exp; ++e) {
        if (acc > cap / base) return false;
        acc *= base;
    }
    return acc <= cap;
}

// Odometer over mixed-radix digit vectors, last digit fastest; yields every
// vector in ascending lexicographic order.
class MixedEnum {
public:
    explicit MixedEnum(std::vector<std::size_t> bases) : bases_(std::move(bases)) {}

    bool next(std::vector<std::size_t>& out) {
        if (fresh_) {
            for (std::size_t s : bases_)
                if (s == 0) return false;
            digits_.assign(bases_.size(), 0);
            fresh_ = false;
            out = digits_;
            return true;
        }
        for (std::size_t k = digits_.size(); k-- > 0;) {
            if (++digits_[k] < bases_[k]) {
                out = digits_;
                return true;
            }
            digits_[k] = 0;
        }
        return false;
    }

private:
    std::vector<std::size_t> bases_;
    std::vector<std::size_t> digits_;
    bool fresh_ = true;
};

MixedEnum uniform_enum(std::size_t dom, std::size_t cod) {
    return MixedEnum(std::vector<std::size_t>(dom, cod));
}

struct BudgetGate {
    const std::size_t budget;
    SearchLog& log;
    // True when the next unit of work would exceed the budget.
    bool exhausted() {
        if (log.emitted + log.prefiltered >= budget) {
            log.budget_exhausted = true;
            return true;
        }
        return false;
    }
};

struct Dims {
    std::size_t low_states, high_states;
    std::size_t low_points, high_points;
    std::size_t low_ivs, high_ivs;
};

Dims dims_of(const ScmPair& pair) {
    return Dims{pair.low.endo_space().size(),  pair.high.endo_space().size(),
                pair.low.exo_space().size(),   pair.high.exo_space().size(),
                pair.low.interventions.members.size(),
                pair.high.interventions.members.size()};
}

TauAbstraction assemble(const Dims& d, std::vector<std::size_t> tau,
                        std::vector<std::size_t> tau_u, std::vector<std::size_t> omega) {
    TauAbstraction abs;
    abs.low_states = d.low_states;
    abs.high_states = d.high_states;
    abs.low_points = d.low_points;
    abs.high_points = d.high_points;
    abs.low_ivs = d.low_ivs;
    abs.high_ivs = d.high_ivs;
    abs.tau = std::move(tau);
    abs.tau_u = std::move(tau_u);
    abs.omega = std::move(omega);
    return abs;
}

// ---------------------------------------------------------------------------
// Partition mode

std::vector<std::vector<std::size_t>> collect_groups(const std::vector<std::size_t>& assignment,
                                                     std::size_t n_high) {
    std::vector<std::vector<std::size_t>> groups(n_high);
    for (std::size_t i = 0; i < assignment.size(); ++i) groups[assignment[i]].push_back(i);
    return groups;
}

struct PreppedGroup {
    std::vector<GroupMap> family;
    // Family-parallel tables with values converted to codomain positions.
    std::vector<std::vector<std::size_t>> pos;
};

std::optional<std::vector<PreppedGroup>> prep_groups(
        const std::vector<Variable>& low_vars, const std::vector<Variable>& high_vars,
        const std::vector<std::vector<std::size_t>>& groups, std::size_t table_cap) {
    std::vector<PreppedGroup> out(groups.size());
    for (std::size_t j = 0; j < groups.size(); ++j) {
        out[j].family = group_map_family(low_vars, groups[j], high_vars[j].range, table_cap);
        if (out[j].family.empty()) return std::nullopt;
        for (const GroupMap& gm : out[j].family) {
            std::vector<std::size_t> pos(gm.table.size());
            for (std::size_t k = 0; k < gm.table.size(); ++k)
                pos[k] = high_vars[j].range.index_of(gm.table[k], high_vars[j].id);
            out[j].pos.push_back(std::move(pos));
        }
    }
    return out;
}

// Joint index of a low state's digits within one group, members ascending,
// last member fastest.
std::size_t group_joint_index(const std::vector<Variable>& low_vars,
                              const std::vector<std::size_t>& members,
                              const std::vector<std::size_t>& digits) {
    std::size_t idx = 0;
    for (std::size_t m : members) idx = idx * low_vars[m].range.size() + digits[m];
    return idx;
}

std::vector<std::size_t> build_map(const std::vector<Variable>& low_vars,
                                   const ProductSpace& low_space, const ProductSpace& high_space,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   const std::vector<const std::vector<std::size_t>*>& pos) {
    std::vector<std::size_t> out(low_space.size());
    std::vector<std::size_t> hd(groups.size());
    for (std::size_t s = 0; s < low_space.size(); ++s) {
        std::vector<std::size_t> digits = low_space.digits(s);
        for (std::size_t j = 0; j < groups.size(); ++j)
            hd[j] = (*pos[j])[group_joint_index(low_vars, groups[j], digits)];
        out[s] = high_space.index(hd);
    }
    return out;
}

// Image of every low intervention under the chosen group maps. Fails when an
// intervention covers a group only partially or maps outside the high poset.
std::optional<std::vector<std::size_t>> derive_omega(
        const ScmPair& pair, const std::vector<std::vector<std::size_t>>& groups,
        const std::vector<const GroupMap*>& chosen) {
    const auto& low_vars = pair.low.endogenous;
    const auto& high_vars = pair.high.endogenous;
    std::vector<std::size_t> omega;
    omega.reserve(pair.low.interventions.members.size());
    for (const Intervention& iv : pair.low.interventions.members) {
        Intervention image;
        for (std::size_t j = 0; j < groups.size(); ++j) {
            std::size_t hit = 0;
            for (std::size_t m : groups[j])
                if (iv.value_of(low_vars[m].id)) ++hit;
            if (hit == 0) continue;
            if (hit != groups[j].size()) return std::nullopt;
            std::size_t idx = 0;
            for (std::size_t m : groups[j]) {
                Value v = *iv.value_of(low_vars[m].id);
                idx = idx * low_vars[m].range.size() +
                      low_vars[m].range.index_of(v, low_vars[m].id);
            }
            image.set(high_vars[j].id, chosen[j]->table[idx]);
        }
        std::optional<std::size_t> hi = pair.high.interventions.index_of(image);
        if (!hi) return std::nullopt;
        omega.push_back(*hi);
    }
    return omega;
}

template <typename Sink>
void stream_partition(const ScmPair& pair, const SearchOptions& opts, SearchLog& log,
                      Sink&& sink) {
    const FiniteScm& L = pair.low;
    const FiniteScm& H = pair.high;
    if (!pow_within(H.endogenous.size(), L.endogenous.size(), kAssignmentCap) ||
        !pow_within(H.exogenous.size(), L.exogenous.size(), kAssignmentCap))
        throw CapacityError("partition search: variable assignment space exceeds 100000000");
    BudgetGate gate{opts.budget, log};
    const Dims d = dims_of(pair);

    // Exogenous side first; it is independent of the endogenous choice, so it
    // is materialized once. Only projections and sums apply (cap 0 disables
    // table enumeration).
    std::vector<std::vector<std::size_t>> exo_maps;
    {
        ProductSpace low_space = L.exo_space(), high_space = H.exo_space();
        MixedEnum ae = uniform_enum(L.exogenous.size(), H.exogenous.size());
        std::vector<std::size_t> a;
        while (ae.next(a)) {
            if (!covers(a, H.exogenous.size())) continue;
            if (gate.exhausted()) return;
            auto groups = collect_groups(a, H.exogenous.size());
            auto prepped = prep_groups(L.exogenous, H.exogenous, groups, 0);
            if (!prepped) {
                ++log.prefiltered;
                continue;
            }
            std::vector<std::size_t> fam_sizes;
            for (const PreppedGroup& g : *prepped) fam_sizes.push_back(g.family.size());
            MixedEnum ce{fam_sizes};
            std::vector<std::size_t> combo;
            while (ce.next(combo)) {
                std::vector<const std::vector<std::size_t>*> pos;
                for (std::size_t j = 0; j < combo.size(); ++j)
                    pos.push_back(&(*prepped)[j].pos[combo[j]]);
                exo_maps.push_back(build_map(L.exogenous, low_space, high_space, groups, pos));
            }
        }
    }
    if (exo_maps.empty()) return;

    ProductSpace low_space = L.endo_space(), high_space = H.endo_space();
    MixedEnum ae = uniform_enum(L.endogenous.size(), H.endogenous.size());
    std::vector<std::size_t> a;
    while (ae.next(a)) {
        if (!covers(a, H.endogenous.size())) continue;
        if (gate.exhausted()) return;
        auto groups = collect_groups(a, H.endogenous.size());
        auto prepped = prep_groups(L.endogenous, H.endogenous, groups, opts.table_cap);
        if (!prepped) {
            ++log.prefiltered;
            continue;
        }
        std::vector<std::size_t> fam_sizes;
        for (const PreppedGroup& g : *prepped) fam_sizes.push_back(g.family.size());
        MixedEnum ce{fam_sizes};
        std::vector<std::size_t> combo;
        while (ce.next(combo)) {
            if (gate.exhausted()) return;
            std::vector<const GroupMap*> chosen;
            std::vector<const std::vector<std::size_t>*> pos;
            for (std::size_t j = 0; j < combo.size(); ++j) {
                chosen.push_back(&(*prepped)[j].family[combo[j]]);
                pos.push_back(&(*prepped)[j].pos[combo[j]]);
            }
            std::optional<std::vector<std::size_t>> omega = derive_omega(pair, groups, chosen);
            if (!omega || !covers(*omega, d.high_ivs)) {
                ++log.prefiltered;
                continue;
            }
            std::vector<std::size_t> tau =
                build_map(L.endogenous, low_space, high_space, groups, pos);
            for (const std::vector<std::size_t>& tu : exo_maps) {
                if (gate.exhausted()) return;
                ++log.emitted;
                if (sink(assemble(d, tau, tu, *omega))) return;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Table mode

template <typename Sink>
void stream_table(const ScmPair& pair, const SearchOptions& opts, SearchLog& log, Sink&& sink) {
    const Dims d = dims_of(pair);
    if (d.low_states > 16) {
        std::ostringstream msg;
        msg << "table search requires at most 16 low endogenous states, got " << d.low_states;
        throw CapacityError(msg.str());
    }
    BudgetGate gate{opts.budget, log};
    MixedEnum tau_e = uniform_enum(d.low_states, d.high_states);
    std::vector<std::size_t> tau, tau_u, omega;
    while (tau_e.next(tau)) {
        if (gate.exhausted()) return;
        if (!covers(tau, d.high_states)) {
            ++log.prefiltered;
            continue;
        }
        MixedEnum tu_e = uniform_enum(d.low_points, d.high_points);
        while (tu_e.next(tau_u)) {
            if (gate.exhausted()) return;
            if (!covers(tau_u, d.high_points)) {
                ++log.prefiltered;
                continue;
            }
            MixedEnum om_e = uniform_enum(d.low_ivs, d.high_ivs);
            while (om_e.next(omega)) {
                if (gate.exhausted()) return;
                if (!covers(omega, d.high_ivs)) {
                    ++log.prefiltered;
                    continue;
                }
                ++log.emitted;
                if (sink(assemble(d, tau, tau_u, omega))) return;
            }
        }
    }
}

template <typename Sink>
void stream_candidates(const ScmPair& pair, const SearchOptions& opts, SearchLog& log,
                       Sink&& sink) {
    if (opts.mode == SearchMode::partition)
        stream_partition(pair, opts, log, std::forward<Sink>(sink));
    else
        stream_table(pair, opts, log, std::forward<Sink>(sink));
}

// Verifies a batch across threads; returns the smallest in-batch index that
// passes, so selection matches the sequential scan.
std::optional<std::size_t> verify_batch(const ScmPair& pair,
                                        const std::vector<TauAbstraction>& batch,
                                        unsigned threads) {
    std::vector<char> pass(batch.size(), 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t k = t; k < batch.size(); k += threads)
                    pass[k] = verify(pair, batch[k]).pass() ? 1 : 0;
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    for (std::size_t k = 0; k < batch.size(); ++k)
        if (pass[k]) return k;
    return std::nullopt;
}

}  // namespace

std::vector<GroupMap> group_map_family(const std::vector<Variable>& vars,
                                       const std::vector<std::size_t>& members,
                                       const Range& codomain, std::size_t table_cap) {
    std::vector<std::size_t> sizes;
    sizes.reserve(members.size());
    for (std::size_t m : members) sizes.push_back(vars[m].range.size());
    ProductSpace joint(sizes);
    if (joint.size() > kJointCap) return {};

    std::vector<GroupMap> family;
    std::set<std::vector<Value>> seen;
    auto add = [&](std::vector<Value> table, std::string descriptor) {
        if (!seen.insert(table).second) return;
        family.push_back(GroupMap{members, std::move(table), std::move(descriptor)});
    };
    auto admissible = [&](const std::vector<Value>& table) {
        std::vector<bool> hit(codomain.size(), false);
        for (Value v : table) {
            std::optional<std::size_t> p = find_value(codomain, v);
            if (!p) return false;
            hit[*p] = true;
        }
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    };

    for (std::size_t k = 0; k < members.size(); ++k) {
        std::vector<Value> table(joint.size());
        for (std::size_t idx = 0; idx < joint.size(); ++idx)
            table[idx] = vars[members[k]].range.values[joint.digits(idx)[k]];
        if (admissible(table)) add(std::move(table), "proj:" + vars[members[k]].id);
    }
    if (members.size() >= 2) {
        std::vector<Value> table(joint.size());
        for (std::size_t idx = 0; idx < joint.size(); ++idx) {
            std::vector<std::size_t> digits = joint.digits(idx);
            Value sum = 0;
            for (std::size_t k = 0; k < members.size(); ++k)
                sum += vars[members[k]].range.values[digits[k]];
            table[idx] = sum;
        }
        if (admissible(table)) add(std::move(table), "sum");
    }
    if (pow_within(codomain.size(), joint.size(), table_cap)) {
        MixedEnum te = uniform_enum(joint.size(), codomain.size());
        std::vector<std::size_t> digits;
        while (te.next(digits)) {
            if (!covers(digits, codomain.size())) continue;
            std::vector<Value> table(joint.size());
            for (std::size_t idx = 0; idx < joint.size(); ++idx)
                table[idx] = codomain.values[digits[idx]];
            std::ostringstream desc;
            desc << "table:";
            for (std::size_t idx = 0; idx < table.size(); ++idx) {
                if (idx) desc << ',';
                desc << table[idx];
            }
            add(std::move(table), desc.str());
        }
    }
    return family;
}

std::vector<TauAbstraction> enumerate_candidates(const ScmPair& pair, const SearchOptions& opts,
                                                 SearchLog* log) {
    SearchLog local;
    SearchLog& l = log ? *log : local;
    std::vector<TauAbstraction> out;
    stream_candidates(pair, opts, l, [&](TauAbstraction abs) {
        out.push_back(std::move(abs));
        return false;
    });
    l.considered = l.emitted;
    return out;
}

SearchResult find_abstraction(const ScmPair& pair, const SearchOptions& opts) {
    SearchResult res;
    if (opts.threads <= 1) {
        stream_candidates(pair, opts, res.log, [&](TauAbstraction abs) {
            if (!verify(pair, abs).pass()) return false;
            res.found = std::move(abs);
            res.index = res.log.emitted - 1;
            return true;
        });
        res.log.considered = res.log.emitted;
        return res;
    }

    // Parallel runs verify in batches but keep the log identical to the
    // sequential scan by snapshotting counters at emission time.
    struct Pending {
        TauAbstraction abs;
        std::size_t index;
        std::size_t prefiltered;
    };
    std::vector<Pending> pending;
    const std::size_t batch_size = std::max<std::size_t>(std::size_t{opts.threads} * 8, 32);
    auto flush = [&]() {
        if (pending.empty()) return false;
        std::vector<TauAbstraction> batch;
        batch.reserve(pending.size());
        for (Pending& p : pending) batch.push_back(p.abs);
        std::optional<std::size_t> hit = verify_batch(pair, batch, opts.threads);
        if (!hit) {
            pending.clear();
            return false;
        }
        Pending& win = pending[*hit];
        res.found = std::move(win.abs);
        res.index = win.index;
        res.log.emitted = win.index + 1;
        res.log.prefiltered = win.prefiltered;
        res.log.budget_exhausted = false;
        return true;
    };
    stream_candidates(pair, opts, res.log, [&](TauAbstraction abs) {
        pending.push_back(Pending{std::move(abs), res.log.emitted - 1, res.log.prefiltered});
        return pending.size() >= batch_size && flush();
    });
    if (!res.found) flush();
    res.log.considered = res.log.emitted;
    return res;
}

}  // namespace ccabs
