#pragma once

#include <string>
#include <vector>

#include "ccabs/scm.hpp"

namespace ccabs {

// Named columns of observed values, one row per observation.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    std::size_t column_index(const std::string& name) const;
    friend bool operator==(const DataTable&, const DataTable&) = default;
};

// Hypothesised structure over data columns: a designated manipulable cause,
// a designated outcome, and parent lists for every modelled variable. Order
// of `parents` follows the column order.
struct CausalGraph {
    std::vector<std::string> columns;  // declared data layout, may exceed the model
    std::string cause;
    std::string target;
    std::vector<std::pair<std::string, std::vector<std::string>>> parents;

    friend bool operator==(const CausalGraph&, const CausalGraph&) = default;
};

}  // namespace ccabs
