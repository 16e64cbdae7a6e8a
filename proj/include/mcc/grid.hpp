#pragma once

#include <Eigen/Dense>
#include <functional>

#include "mcc/errors.hpp"

namespace mcc {

// Uniform partition of (0,1) into n_cells intervals of width h = 1/n_cells.
// Immutable after construction; all operations on it are pure.
class Partition {
public:
    static Partition uniform(int n_cells);

    int n_cells() const { return n_cells_; }
    double h() const { return h_; }
    const Eigen::VectorXd& cell_edges() const { return edges_; }

    double cell_left(int i) const { return edges_[i]; }
    double cell_right(int i) const { return edges_[i + 1]; }
    double cell_mid(int i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }

    bool same_grid(const Partition& other) const { return n_cells_ == other.n_cells_; }

    // True when `this` is a coarsening of `fine`, i.e. fine.n_cells is an
    // integer multiple of n_cells (uniform grids on the same domain).
    bool divides(const Partition& fine) const { return fine.n_cells_ % n_cells_ == 0; }

private:
    Partition(int n_cells, double h, Eigen::VectorXd edges);

    int n_cells_;
    double h_;
    Eigen::VectorXd edges_;
};

Partition refine(const Partition& p);

// Piecewise-constant function on a partition (controls w, relaxation
// variable z, cellwise bounds).
struct CellFunction {
    Partition part;
    Eigen::VectorXd values;

    CellFunction(Partition p, Eigen::VectorXd v);
    static CellFunction constant(const Partition& p, double value);

    double operator()(double x) const;
};

// Continuous piecewise-linear (P1) function given by its nodal values; the
// homogeneous Dirichlet variants keep first and last entries at exactly 0.
struct NodalFunction {
    Partition part;
    Eigen::VectorXd values; // size n_cells 1

    NodalFunction(Partition p, Eigen::VectorXd v);
    static NodalFunction zero(const Partition& p);
    static NodalFunction interpolate(const Partition& p, const std::function<double(double)>& f);

    double operator()(double x) const;
};

// Cell-averaging projection onto `target`. Exact for piecewise-linear and
// piecewise-constant inputs; callables are integrated with 3-point Gauss
// quadrature per target cell.
CellFunction project_avg(const CellFunction& f, const Partition& target);
CellFunction project_avg(const NodalFunction& f, const Partition& target);
CellFunction project_avg(const std::function<double(double)>& f, const Partition& target);

// Total variation of a piecewise-constant function: sum of the absolute
// interior jump heights. Boundary values are not counted (seminorm on the
// open domain).
double tv(const CellFunction& w);

// Exact norms. NodalFunction norms use the exact P1 mass matrix.
double norm_l1(const CellFunction& f);
double norm_l2(const CellFunction& f);
double norm_linf(const CellFunction& f);
double norm_l2(const NodalFunction& f);
double norm_linf(const NodalFunction& f);

// Exact integral of (P1 nodal) x (piecewise constant) over (0,1); grids must
// be compatible (cell grid divides the nodal grid).
double integrate_p1_pc(const NodalFunction& phi, const CellFunction& psi);

// Exact integral of |phi - psi|^2 where phi is P1 and psi piecewise constant
// on a coarser grid (used for projection-error studies).
double l2_diff_p1_pc(const NodalFunction& phi, const CellFunction& psi);

// Exact L1 distance between two piecewise-constant functions on compatible grids.
double l1_diff(const CellFunction& a, const CellFunction& b);

} // namespace mcc
