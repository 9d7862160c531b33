#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccabs/abstraction.hpp"

namespace ccabs {

// Raised when an input is too large for exhaustive table enumeration.
struct CapacityError : StructuralError {
    using StructuralError::StructuralError;
};

enum class SearchMode {
    // Low variables are grouped onto high variables; each group is mapped by
    // a structured family (projections, the group sum, small surjective
    // tables) and omega is derived from the groups. Tractable on real pairs.
    partition,
    // Every total map triple, filtered only by surjectivity. Exhaustive but
    // feasible only for tiny spaces.
    table,
};

struct SearchOptions {
    SearchMode mode = SearchMode::partition;
    // Bounds the total number of candidates examined, whether emitted or
    // rejected structurally.
    std::size_t budget = 1'000'000;
    // Full per-group tables are enumerated only while |codomain|^|joint| stays
    // within this bound.
    std::size_t table_cap = 4096;
    unsigned threads = 1;
};

struct SearchLog {
    std::size_t emitted = 0;      // candidates handed to the verifier
    std::size_t prefiltered = 0;  // rejected before emission (structure or surjectivity)
    std::size_t considered = 0;   // emission index of the winner + 1, or all emitted
    bool budget_exhausted = false;
};

struct SearchResult {
    std::optional<TauAbstraction> found;
    std::size_t index = 0;  // enumeration position of the winner
    SearchLog log;
};

// One group of low variables mapped onto a single high variable. The table
// covers the group's joint value space, members ascending, last one fastest.
struct GroupMap {
    std::vector<std::size_t> members;
    std::vector<Value> table;
    std::string descriptor;  // "proj:<id>", "sum", or "table:v0,v1,..."
};

// Every admissible map from the group onto `codomain`, deduplicated by
// table content with first occurrence kept: projections in member order,
// then the group sum, then exhaustive surjective tables when within cap.
std::vector<GroupMap> group_map_family(const std::vector<Variable>& vars,
                                       const std::vector<std::size_t>& members,
                                       const Range& codomain, std::size_t table_cap);

// Materializes the candidate stream in canonical order (tests and small
// spaces only; find_abstraction streams lazily).
std::vector<TauAbstraction> enumerate_candidates(const ScmPair& pair,
                                                 const SearchOptions& opts,
                                                 SearchLog* log = nullptr);

// First candidate in canonical order that verifies. Parallel runs split
// verification across threads but select by enumeration index, so the result
// never depends on the thread count.
SearchResult find_abstraction(const ScmPair& pair, const SearchOptions& opts);

}  // namespace ccabs
