#include "mcc/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <vector>

namespace mcc {

namespace {

constexpr double kPiSq = 9.869604401089358; // pi^2

using Triplet = Eigen::Triplet<double>;

// factor once, solve with one step of iterative refinement
struct BandedSolver {
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt;
    const SpMat* A = nullptr;

    void factorize(const SpMat& mat) {
        A = &mat;
        ldlt.compute(mat);
        if (ldlt.info() != Eigen::Success)
            throw SingularSystem("sparse factorization failed (coefficient outside the well-posed range?)");
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd x = ldlt.solve(rhs);
        Eigen::VectorXd r = rhs - (*A) * x;
        x += ldlt.solve(r);
        return x;
    }
};

Eigen::VectorXd expand_to_fem_cells(const CellFunction& w, const Partition& fem_grid) {
    if (!w.part.divides(fem_grid))
        throw IncompatibleGrids("control grid does not divide the fem grid");
    const int r = fem_grid.n_cells() / w.part.n_cells();
    Eigen::VectorXd out(fem_grid.n_cells());
    for (int i = 0; i < fem_grid.n_cells(); ++i) out[i] = w.values[i / r];
    return out;
}

// exact \int w phi_j phi_k for w constant per fem cell, interior dofs
SpMat weighted_mass(const Partition& fem_grid, const Eigen::VectorXd& wcell) {
    const int N = fem_grid.n_cells();
    const int n = N - 1;
    const double h = fem_grid.h();
    std::vector<Triplet> trip;
    trip.reserve(3 * n);
    for (int j = 0; j < n; ++j) {
        // interior dof j sits at node j+1, adjacent to cells j and j+1
        trip.emplace_back(j, j, (wcell[j] + wcell[j + 1]) * h / 3.0);
        if (j + 1 < n) {
            trip.emplace_back(j, j + 1, wcell[j + 1] * h / 6.0);
            trip.emplace_back(j + 1, j, wcell[j + 1] * h / 6.0);
        }
    }
    SpMat M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

NodalFunction to_nodal(const Partition& fem_grid, const Eigen::VectorXd& interior) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(fem_grid.n_cells() + 1);
    full.segment(1, interior.size()) = interior;
    return NodalFunction(fem_grid, std::move(full));
}

SpMat averaged_operator(const FemOperators& ops, const Eigen::VectorXd& w_avg) {
    // K + E diag(P_h w) R; symmetric since R = E^T / |Q|
    SpMat D(w_avg.size(), w_avg.size());
    std::vector<Triplet> trip;
    for (int i = 0; i < w_avg.size(); ++i) trip.emplace_back(i, i, w_avg[i]);
    D.setFromTriplets(trip.begin(), trip.end());
    SpMat A = ops.stiffness + SpMat(ops.cell_load * D * ops.avg_map);
    return A;
}

} // namespace

Eigen::VectorXd load_from_cells(const Partition& fem_grid, const CellFunction& f) {
    const int n = fem_grid.n_cells() - 1;
    const double h = fem_grid.h();
    const Eigen::VectorXd fc = expand_to_fem_cells(f, fem_grid);
    Eigen::VectorXd F(n);
    for (int j = 0; j < n; ++j) F[j] = 0.5 * h * (fc[j] + fc[j + 1]);
    return F;
}

Eigen::VectorXd load_from_nodal(const Partition& fem_grid, const Eigen::VectorXd& nodal_values) {
    const int n = fem_grid.n_cells() - 1;
    const double h = fem_grid.h();
    Eigen::VectorXd F(n);
    for (int j = 0; j < n; ++j) {
        const double gl = nodal_values[j], gm = nodal_values[j + 1], gr = nodal_values[j + 2];
        F[j] = h / 6.0 * (gl + 4.0 * gm + gr);
    }
    return F;
}

FemOperators FemOperators::assemble(const Partition& fem_grid, const Partition& coarse) {
    if (!coarse.divides(fem_grid))
        throw IncompatibleGrids("coarse grid does not divide the fem grid");
    const int N = fem_grid.n_cells();
    const int n = N - 1;
    const double h = fem_grid.h();
    const int Nc = coarse.n_cells();
    const int r = N / Nc;

    std::vector<Triplet> kt, mt, et, rt;
    for (int j = 0; j < n; ++j) {
        kt.emplace_back(j, j, 2.0 / h);
        mt.emplace_back(j, j, 2.0 * h / 3.0);
        if (j + 1 < n) {
            kt.emplace_back(j, j + 1, -1.0 / h);
            kt.emplace_back(j + 1, j, -1.0 / h);
            mt.emplace_back(j, j + 1, h / 6.0);
            mt.emplace_back(j + 1, j, h / 6.0);
        }
    }
    // node j+1 contributes h/2 inside each of its two adjacent fine cells;
    // duplicates within one coarse cell are summed by setFromTriplets
    const double H = coarse.h();
    for (int j = 0; j < n; ++j) {
        const int cl = j / r, cr = (j + 1) / r;
        et.emplace_back(j, cl, 0.5 * h);
        et.emplace_back(j, cr, 0.5 * h);
        rt.emplace_back(cl, j, 0.5 * h / H);
        rt.emplace_back(cr, j, 0.5 * h / H);
    }

    FemOperators ops{fem_grid, coarse, SpMat(n, n), SpMat(n, n), SpMat(n, Nc), SpMat(Nc, n)};
    ops.stiffness.setFromTriplets(kt.begin(), kt.end());
    ops.mass.setFromTriplets(mt.begin(), mt.end());
    ops.cell_load.setFromTriplets(et.begin(), et.end());
    ops.avg_map.setFromTriplets(rt.begin(), rt.end());
    return ops;
}

PdeProblem::PdeProblem(CellFunction f_, double w_lo_, double w_hi_, Partition fem, Partition control)
    : f(std::move(f_)), w_lo(w_lo_), w_hi(w_hi_), fem_grid(std::move(fem)), control_grid(std::move(control)) {
    if (!(w_lo > -kPiSq && w_lo <= w_hi && w_hi < kPiSq))
        throw CoercivityLost("control bounds must satisfy -pi^2 < w_lo <= w_hi < pi^2");
    if (!control_grid.divides(fem_grid))
        throw IncompatibleGrids("control grid does not divide the fem grid");
}

NodalFunction solve_state(const PdeProblem& prob, const CellFunction& w) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, prob.fem_grid);
    const Eigen::VectorXd wc = expand_to_fem_cells(w, prob.fem_grid);
    SpMat A = ops.stiffness + weighted_mass(prob.fem_grid, wc);
    BandedSolver solver;
    solver.factorize(A);
    return to_nodal(prob.fem_grid, solver.solve(load_from_cells(prob.fem_grid, prob.f)));
}

NodalFunction solve_state_avg(const PdeProblem& prob, const CellFunction& w, const Partition& coarse) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, coarse);
    const Eigen::VectorXd w_avg = project_avg(w, coarse).values;
    SpMat A = averaged_operator(ops, w_avg);
    BandedSolver solver;
    solver.factorize(A);
    return to_nodal(prob.fem_grid, solver.solve(load_from_cells(prob.fem_grid, prob.f)));
}

NodalFunction solve_adjoint(const PdeProblem& prob, const CellFunction& w, const NodalFunction& rhs) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, prob.fem_grid);
    const Eigen::VectorXd wc = expand_to_fem_cells(w, prob.fem_grid);
    SpMat A = ops.stiffness + weighted_mass(prob.fem_grid, wc);
    BandedSolver solver;
    solver.factorize(A);
    return to_nodal(prob.fem_grid, solver.solve(load_from_nodal(prob.fem_grid, rhs.values)));
}

NodalFunction solve_adjoint_avg(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                                const NodalFunction& rhs) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, coarse);
    const Eigen::VectorXd w_avg = project_avg(w, coarse).values;
    SpMat A = averaged_operator(ops, w_avg);
    BandedSolver solver;
    solver.factorize(A);
    return to_nodal(prob.fem_grid, solver.solve(load_from_nodal(prob.fem_grid, rhs.values)));
}

double tracking_value(const NodalFunction& u, const NodalFunction& u_d) {
    NodalFunction d(u.part, u.values - u_d.values);
    const double n = norm_l2(d);
    return 0.5 * n * n;
}

double huber(double d, double eps) {
    const double a = std::abs(d);
    return a <= eps ? d * d / (2.0 * eps) + 0.5 * eps : a;
}

double huber_prime(double d, double eps) {
    return std::abs(d) <= eps ? d / eps : (d > 0 ? 1.0 : -1.0);
}

double huber_tv(const CellFunction& w, double eps) {
    double s = 0.0;
    for (int i = 0; i + 1 < w.values.size(); ++i) s += huber(w.values[i + 1] - w.values[i], eps);
    return s;
}

ReducedEval evaluate_reduced(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_d,
                             double alpha, double eps_huber) {
    NodalFunction u = solve_state_avg(prob, w, w.part);
    const double j = tracking_value(u, u_d);
    return ReducedEval{j + alpha * huber_tv(w, eps_huber), j + alpha * tv(w), j, std::move(u)};
}

CellFunction reduced_gradient(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_d,
                              double alpha_smooth, double eps_huber) {
    const Partition& coarse = w.part;
    FemOperators ops = FemOperators::assemble(prob.fem_grid, coarse);
    const Eigen::VectorXd w_avg = project_avg(w, coarse).values;
    SpMat A = averaged_operator(ops, w_avg);
    BandedSolver solver;
    solver.factorize(A);
    const Eigen::VectorXd u = solver.solve(load_from_cells(prob.fem_grid, prob.f));
    NodalFunction un = to_nodal(prob.fem_grid, u);
    Eigen::VectorXd diff = un.values - u_d.values;
    const Eigen::VectorXd p = solver.solve(load_from_nodal(prob.fem_grid, diff));

    const Eigen::VectorXd pu = ops.avg_map * u;
    const Eigen::VectorXd pp = ops.avg_map * p;
    const double H = coarse.h();
    Eigen::VectorXd g = -(pu.array() * pp.array() * H).matrix();

    if (alpha_smooth != 0.0) {
        for (int i = 0; i + 1 < g.size(); ++i) {
            const double hp = huber_prime(w.values[i + 1] - w.values[i], eps_huber);
            g[i] -= alpha_smooth * hp;
            g[i + 1] += alpha_smooth * hp;
        }
    }
    return CellFunction(coarse, std::move(g));
}

NodalFunction state_derivative(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                               const CellFunction& s) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, coarse);
    const Eigen::VectorXd w_avg = project_avg(w, coarse).values;
    SpMat A = averaged_operator(ops, w_avg);
    BandedSolver solver;
    solver.factorize(A);
    const Eigen::VectorXd u = solver.solve(load_from_cells(prob.fem_grid, prob.f));
    // rhs: -\int (P_h u)(P_h s) v  =  -E (Pu .* Ps)
    const Eigen::VectorXd rhs = -(ops.cell_load * (ops.avg_map * u).cwiseProduct(project_avg(s, coarse).values));
    return to_nodal(prob.fem_grid, solver.solve(rhs));
}

NodalFunction state_second_derivative(const PdeProblem& prob, const CellFunction& w, const Partition& coarse,
                                      const CellFunction& phi, const CellFunction& psi) {
    FemOperators ops = FemOperators::assemble(prob.fem_grid, coarse);
    const Eigen::VectorXd w_avg = project_avg(w, coarse).values;
    SpMat A = averaged_operator(ops, w_avg);
    BandedSolver solver;
    solver.factorize(A);
    const Eigen::VectorXd qphi_full = state_derivative(prob, w, coarse, phi).values;
    const Eigen::VectorXd qpsi_full = state_derivative(prob, w, coarse, psi).values;
    const Eigen::VectorXd qphi = ops.avg_map * qphi_full.segment(1, prob.fem_grid.n_cells() - 1);
    const Eigen::VectorXd qpsi = ops.avg_map * qpsi_full.segment(1, prob.fem_grid.n_cells() - 1);
    const Eigen::VectorXd pphi = project_avg(phi, coarse).values;
    const Eigen::VectorXd ppsi = project_avg(psi, coarse).values;
    const Eigen::VectorXd rhs = -(ops.cell_load * (qphi.cwiseProduct(ppsi) + qpsi.cwiseProduct(pphi)));
    return to_nodal(prob.fem_grid, solver.solve(rhs));
}

} // namespace mcc
