#pragma once

#include <iosfwd>
#include <vector>

#include "mcc/fem.hpp"

namespace mcc {

struct EnumerationSpec {
    int n_cells = 4;
    std::vector<int> value_set;
    int fem_n = 64;
    long long budget = 1000000;
};

struct OracleResult {
    CellFunction w_star;
    double obj_star = 0.0;
    long long evaluations = 0;
    // full value table: control vector indices into value_set, objective
    std::vector<std::pair<std::vector<int>, double>> table;
    bool keep_table = true;
};

// Exact optimum of the averaged-dynamics integer problem over the enumerated
// control set (lexicographic order, ties resolved to the earliest vector).
OracleResult enumerate_optimum(const EnumerationSpec& spec, const PdeProblem& prob, const NodalFunction& u_d,
                               double alpha, bool keep_table = true, bool reverse_order = false);

void export_value_table_csv(const EnumerationSpec& spec, const OracleResult& result, std::ostream& os);

} // namespace mcc
