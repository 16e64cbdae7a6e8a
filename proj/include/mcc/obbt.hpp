#pragma once

#include <iosfwd>

#include "mcc/relaxation.hpp"

namespace mcc {

struct ObbtSettings {
    double safeguard = 1e-7;  // relaxes every computed bound before assignment
    double sweep_tol = 1e-6;  // terminate when a full lo+hi pass moves nothing more
    int max_sweeps = 50;
    enum class Order { LoThenHi } order = Order::LoThenHi;
    bool parallel_sweep = false; // per-pass solves against the pass-start envelope
    int threads = 1;
    bool record_objective = true; // one relaxation solve per sweep for the trace
    SolveSettings lp;

    ObbtSettings() { lp.eps_prim = lp.eps_dual = 1e-9; }
};

struct ObbtUpdate {
    int sweep;
    char side; // 'l' or 'u'
    int cell;
    double old_bound;
    double lp_value;
    double new_bound;
};

struct ObbtSweepRecord {
    int sweep;
    double max_move;
    double lower_bound; // NaN when objective recording is off
    double wall_seconds;
};

struct ObbtTrace {
    std::vector<ObbtSweepRecord> sweeps;
    std::vector<ObbtUpdate> updates;
    long long lp_solves = 0;
    long long lp_iterations = 0;
};

struct ObbtResult {
    Envelope env;
    ObbtTrace trace;
};

// Algorithm: sweep the lower bounds cell by cell in ascending order, then the
// upper bounds, repeating until a full pass moves no bound by more than
// sweep_tol. Each bound is the LP extremum of the averaged state over the
// current feasible set, relaxed outward by the safeguard.
ObbtResult tighten(const RelaxationSpec& spec, const ObbtSettings& settings = {});

struct ObbtBoundResult {
    double m = 0.0;
    Envelope env;
    ObbtTrace trace;
    SolveReport report;
};

ObbtBoundResult lower_bound_after_obbt(const RelaxationSpec& spec, const ObbtSettings& settings = {});

// CSV export of the per-update trace (sweep, side, cell, old/new bound, lp value).
void export_trace_csv(const ObbtTrace& trace, std::ostream& os);

} // namespace mcc
