#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcc/errors.hpp"

namespace mcc {

using SpMat = Eigen::SparseMatrix<double>;

// +/- infinity sentinel for constraint bounds; projections short-circuit on it.
constexpr double kInf = 1e20;

// Canonical convex program  min 0.5 x'Px + q'x  s.t.  l <= Ax <= u.
struct SparseQP {
    SpMat P;               // n x n, symmetric PSD (zero for LPs)
    Eigen::VectorXd q;     // n
    SpMat A;               // m x n
    Eigen::VectorXd l, u;  // m, entries clipped to +/- kInf
    std::vector<std::string> var_names; // optional, diagnostics only

    int num_vars() const { return static_cast<int>(q.size()); }
    int num_rows() const { return static_cast<int>(l.size()); }

    // dimension checks, l <= u, PSD probe via Cholesky of P + 1e-12 I
    void validate() const;
};

enum class SolveStatus { Optimal, MaxIter, Infeasible };

struct SolveReport {
    Eigen::VectorXd x;
    Eigen::VectorXd y; // row duals
    Eigen::VectorXd z; // row activities at the solution
    double obj = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    double prim_res = std::numeric_limits<double>::infinity();
    double dual_res = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool polished = false;
};

struct SolveSettings {
    double eps_prim = 1e-9;
    double eps_dual = 1e-9;
    int max_iter = 200000;     // total splitting iterations across the proximal loop
    double rho = 0.2;          // fixed penalty
    double rho_eq_scale = 1e4; // equality rows get rho * rho_eq_scale
    double sigma = 1e-6;
    double prox_mu = 1e-3;     // initial outer proximal weight; keeps subproblems strongly convex
    double prox_mu_min = 1e-8; // the weight shrinks geometrically so mu*dx vanishes
    double prox_shrink = 0.2;
    int max_outer = 200;
    double over_relax = 1.6;
    int check_every = 25;
    bool scaling = true;
    int scaling_iters = 10;
    bool polish = true;
    bool verbose = false;
};

// Operator-splitting solver over one fixed feasible-set structure. The KKT
// factorization is reused across objective swaps and bound updates; matrix
// value updates keep the symbolic pattern and only refactorize numerically.
class QpSolver {
public:
    QpSolver(SparseQP qp, SolveSettings settings = {});

    SolveReport solve();                       // warm-starts from the last state
    void set_objective(const Eigen::VectorXd& q);
    void set_bounds(const Eigen::VectorXd& l, const Eigen::VectorXd& u);
    void update_matrix_values(const SpMat& A_same_pattern);
    void clear_warm_start();
    void warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z);

    const SparseQP& problem() const { return qp_; }

private:
    void build_scaling();
    void build_kkt();
    void refactorize();
    void compute_residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                           double* prim, double* dual) const;
    // residuals/objective of the proximally shifted inner problem, scaled data
    void inner_residuals(const Eigen::VectorXd& q_eff, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                         const Eigen::VectorXd& zs, double* prim, double* dual) const;
    bool try_polish(SolveReport& rep, const Eigen::VectorXd& q_eff, double obj_admm);

    SparseQP qp_;          // original data
    SolveSettings st_;

    // scaled working data
    Eigen::VectorXd d_, e_; // variable / row scalings
    double cost_scale_ = 1.0;
    SpMat Ps_, As_;
    Eigen::VectorXd qs_, ls_, us_;
    Eigen::VectorXd rho_vec_, rho_inv_;

    SpMat kkt_;
    Eigen::SimplicialLDLT<SpMat, Eigen::Upper, Eigen::AMDOrdering<int>> ldlt_;
    bool analyzed_ = false;
    double mu_cur_ = 1e-3;

    // iterate state (scaled)
    Eigen::VectorXd xs_, ys_, zs_;
    bool have_warm_ = false;
};

SolveReport solve(const SparseQP& qp, const SolveSettings& settings = {});

// Re-solve over the identical constraint data with a new linear objective,
// warm-started from a previous report.
SolveReport solve_lp_objective_swap(const SparseQP& qp, const Eigen::VectorXd& new_q,
                                    const SolveReport& warm, const SolveSettings& settings = {});

// Plain-text interchange dump (header line, then triplet rows) and reader.
void dump_problem(const SparseQP& qp, std::ostream& os);
SparseQP read_problem(std::istream& is);

} // namespace mcc
