#pragma once

#include "mcc/fem.hpp"

namespace mcc {

struct PrimalResult {
    CellFunction w;
    NodalFunction u;
    double obj_nonsmooth = 0.0; // tracking + alpha * exact tv
    double obj_smoothed = 0.0;  // tracking + alpha * huber tv
    int iters = 0;
};

struct ContinuousSettings {
    double eps_huber = 1e-3;
    double step_tol = 1e-8;
    int max_iters = 5000;
    double armijo = 1e-4;
    bool start_at_midpoint = true; // otherwise start_value is used
    double start_value = 0.0;
};

// Projected-gradient descent with Armijo backtracking on the Huber-smoothed
// reduced objective; the returned bound is the exact nonsmooth objective of
// the final iterate.
PrimalResult solve_continuous(const PdeProblem& prob, const NodalFunction& u_d, double alpha,
                              const Partition& grid, const ContinuousSettings& settings = {});

struct IntegerSettings {
    ContinuousSettings relaxed;  // settings of the continuous warm start
    int max_passes = 200;
};

// Integer local search: starts from the rounded continuous solution and
// applies single-cell integer moves and two-cell value swaps in a fixed
// deterministic order, accepting strict decreases until no move improves.
PrimalResult solve_integer(const PdeProblem& prob, const NodalFunction& u_d, double alpha,
                           const Partition& grid, const IntegerSettings& settings = {});

} // namespace mcc
