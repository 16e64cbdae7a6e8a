#pragma once

#include <Eigen/Sparse>

#include "mcc/grid.hpp"

namespace mcc {

using SpMat = Eigen::SparseMatrix<double>;

// Assembled P1 operators on the interior Dirichlet dofs of a uniform fem
// grid, together with the transfer maps to a coarse cell grid:
//   stiffness K_jk = int grad(phi_j) grad(phi_k)
//   mass      M_jk = int phi_j phi_k
//   cell_load E_ji = int_{Q_i} phi_j          (coarse cell i)
//   avg_map   R_ij = (1/|Q_i|) int_{Q_i} phi_j (cell averages of P1 data)
struct FemOperators {
    Partition fem_grid;
    Partition coarse;
    SpMat stiffness; // n x n, n = fem_grid.n_cells() - 1
    SpMat mass;      // n x n
    SpMat cell_load; // n x Nc
    SpMat avg_map;   // Nc x n

    static FemOperators assemble(const Partition& fem_grid, const Partition& coarse);
};

// -Delta u + u w = f on (0,1), u(0) = u(1) = 0, with w piecewise constant
// between bounds w_lo <= w <= w_hi. Well-posedness needs w_lo > -pi^2.
struct PdeProblem {
    CellFunction f;      // source on the fem cell grid
    double w_lo, w_hi;
    Partition fem_grid;
    Partition control_grid;

    PdeProblem(CellFunction f_, double w_lo_, double w_hi_, Partition fem, Partition control);
};

// Load vectors against the interior P1 basis: a cellwise source on the fem
// cell grid, and a P1 source given by all nodal values.
Eigen::VectorXd load_from_cells(const Partition& fem_grid, const CellFunction& f);
Eigen::VectorXd load_from_nodal(const Partition& fem_grid, const Eigen::VectorXd& nodal_values);

// Galerkin solution of the state equation with the exact w-weighted mass term.
NodalFunction solve_state(const PdeProblem& prob, const CellFunction& w);

// State equation with the locally averaged bilinear term (P_h w)(P_h u) on
// the cells of `coarse`.
NodalFunction solve_state_avg(const PdeProblem& prob, const CellFunction& w, const Partition& coarse);

// Adjoint equation int grad(p) grad(v) + int p w v = int g v for nodal g.
NodalFunction solve_adjoint(const PdeProblem& prob, const CellFunction& w, const NodalFunction& rhs);

// Adjoint of the locally averaged operator (the operator is symmetric, so
// this is a state solve with a nodal right-hand side).
NodalFunction solve_adjoint_avg(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                                const NodalFunction& rhs);

// 0.5 * || u - u_d ||_{L2}^2 with the exact P1 mass matrix.
double tracking_value(const NodalFunction& u, const NodalFunction& u_d);

// Overestimating Huber smoothing of |d| with parameter eps.
double huber(double d, double eps);
double huber_prime(double d, double eps);
double huber_tv(const CellFunction& w, double eps);

// Evaluation of the reduced objective j(S(w)) + alpha * TV_huber(w) for the
// locally averaged dynamics at the control resolution.
struct ReducedEval {
    double smoothed;  // j + alpha * huber TV
    double nonsmooth; // j + alpha * exact TV
    double j_track;
    NodalFunction u;
};
ReducedEval evaluate_reduced(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_d,
                             double alpha, double eps_huber);

// Gradient of the reduced smoothed objective; the bilinear-term contribution
// on cell i is -(P_h p)_i (P_h u)_i |Q_i|.
CellFunction reduced_gradient(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_d,
                              double alpha_smooth, double eps_huber = 1e-3);

// Second derivative of the control-to-state map applied to a pair of
// directions; verification routine for the curvature bound, not used by any
// solver.
NodalFunction state_second_derivative(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                                      const CellFunction& phi, const CellFunction& psi);

// Directional derivative q = S'(w) s of the averaged control-to-state map.
NodalFunction state_derivative(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                               const CellFunction& s);

} // namespace mcc
