#pragma once

#include "mcc/fem.hpp"
#include "mcc/qp.hpp"

namespace mcc {

// Per-cell interval data (u_lo <= P_h u <= u_hi, w_lo <= w <= w_hi on each
// coarse cell) parameterizing the McCormick feasible set.
struct Envelope {
    Partition coarse;
    CellFunction u_lo, u_hi;
    CellFunction w_lo, w_hi;

    static Envelope uniform(const Partition& coarse, double ulo, double uhi, double wlo, double whi);
    void validate() const;
};

enum class RelaxationKind { PointwiseMcC, AveragedMcCh, FullyAveragedMcChh };

struct RelaxationSpec {
    RelaxationKind kind;
    PdeProblem prob;
    Envelope env;
    double alpha = 0.0;
    NodalFunction u_d;

    void validate() const;
    // grid the control variables live on: env.coarse for the fully averaged
    // program, the problem's control grid otherwise
    const Partition& w_grid() const;
};

// Layout of the assembled program. Variables are ordered
// [u interior | w cells | z coarse cells | t jumps]; rows are ordered
// [state | 4 McCormick per coarse cell | u-box | w-box | tv epigraph].
struct VariableMap {
    int n_u = 0, n_w = 0, n_z = 0, n_t = 0;
    int rows_state = 0, rows_mcc = 0, rows_ubox = 0, rows_wbox = 0, rows_tv = 0;

    int u_off() const { return 0; }
    int w_off() const { return n_u; }
    int z_off() const { return n_u + n_w; }
    int t_off() const { return n_u + n_w + n_z; }
    int num_vars() const { return n_u + n_w + n_z + n_t; }

    int state_row() const { return 0; }
    int mcc_row() const { return rows_state; }
    int ubox_row() const { return rows_state + rows_mcc; }
    int wbox_row() const { return rows_state + rows_mcc + rows_ubox; }
    int tv_row() const { return rows_state + rows_mcc + rows_ubox + rows_wbox; }
    int num_rows() const { return rows_state + rows_mcc + rows_ubox + rows_wbox + rows_tv; }
};

struct BuiltRelaxation {
    SparseQP qp;
    VariableMap map;
    double obj_constant = 0.0; // 0.5 ||u_d||^2, added back to reported objectives
};

BuiltRelaxation build(const RelaxationSpec& spec);

// Refresh the envelope-dependent entries (McCormick coefficients and row
// bounds, u-box bounds) of an already built program in place.
void refresh_envelope(const RelaxationSpec& spec, BuiltRelaxation& built);

struct LowerBoundResult {
    double m = 0.0;
    SolveReport report;
    CellFunction w;
    NodalFunction u;
    CellFunction z;
};

LowerBoundResult lower_bound_solve(const RelaxationSpec& spec, const SolveSettings& settings = {});

// Maximum constraint violation of the canonical embedded point for a control
// w that is feasible for the original problem's box.
double embed_check(const RelaxationSpec& spec, const CellFunction& w);

// Interchange dump with a JSON sidecar describing the index map.
void dump_relaxation(const BuiltRelaxation& built, std::ostream& problem_os, std::ostream& sidecar_os);

} // namespace mcc
