#include "mcc/grid.hpp"

#include <cmath>

namespace mcc {

Partition::Partition(int n_cells, double h, Eigen::VectorXd edges)
    : n_cells_(n_cells), h_(h), edges_(std::move(edges)) {}

Partition Partition::uniform(int n_cells) {
    if (n_cells < 1) throw IncompatibleGrids("partition needs at least one cell");
    const double h = 1.0 / n_cells;
    Eigen::VectorXd edges(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i) edges[i] = static_cast<double>(i) / n_cells;
    edges[n_cells] = 1.0;
    return Partition(n_cells, h, std::move(edges));
}

Partition refine(const Partition& p) { return Partition::uniform(2 * p.n_cells()); }

CellFunction::CellFunction(Partition p, Eigen::VectorXd v) : part(std::move(p)), values(std::move(v)) {
    if (values.size() != part.n_cells())
        throw IncompatibleGrids("cell values do not match partition size");
}

CellFunction CellFunction::constant(const Partition& p, double value) {
    return CellFunction(p, Eigen::VectorXd::Constant(p.n_cells(), value));
}

double CellFunction::operator()(double x) const {
    int i = static_cast<int>(std::floor(x * part.n_cells()));
    if (i < 0) i = 0;
    if (i >= part.n_cells()) i = part.n_cells() - 1;
    return values[i];
}

NodalFunction::NodalFunction(Partition p, Eigen::VectorXd v) : part(std::move(p)), values(std::move(v)) {
    if (values.size() != part.n_cells() + 1)
        throw IncompatibleGrids("nodal values do not match partition size");
}

NodalFunction NodalFunction::zero(const Partition& p) {
    return NodalFunction(p, Eigen::VectorXd::Zero(p.n_cells() + 1));
}

NodalFunction NodalFunction::interpolate(const Partition& p, const std::function<double(double)>& f) {
    Eigen::VectorXd v(p.n_cells() + 1);
    for (int j = 0; j <= p.n_cells(); ++j) v[j] = f(p.cell_edges()[j]);
    return NodalFunction(p, std::move(v));
}

double NodalFunction::operator()(double x) const {
    const int n = part.n_cells();
    int i = static_cast<int>(std::floor(x * n));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    const double t = x * n - i;
    return (1.0 - t) * values[i] + t * values[i + 1];
}

namespace {

int ratio_or_throw(const Partition& fine, const Partition& coarse) {
    if (!coarse.divides(fine))
        throw IncompatibleGrids("source resolution is not a multiple of the target resolution");
    return fine.n_cells() / coarse.n_cells();
}

} // namespace

CellFunction project_avg(const CellFunction& f, const Partition& target) {
    if (f.part.divides(target)) {
        // input is constant on coarser cells; the projection reproduces it
        const int r = target.n_cells() / f.part.n_cells();
        Eigen::VectorXd out(target.n_cells());
        for (int i = 0; i < target.n_cells(); ++i) out[i] = f.values[i / r];
        return CellFunction(target, std::move(out));
    }
    const int r = ratio_or_throw(f.part, target);
    Eigen::VectorXd out(target.n_cells());
    for (int i = 0; i < target.n_cells(); ++i) out[i] = f.values.segment(i * r, r).mean();
    return CellFunction(target, std::move(out));
}

CellFunction project_avg(const NodalFunction& f, const Partition& target) {
    const int r = ratio_or_throw(f.part, target);
    // exact cell average of a P1 function: mean of the fine-cell midpoints
    Eigen::VectorXd out(target.n_cells());
    for (int i = 0; i < target.n_cells(); ++i) {
        double s = 0.0;
        for (int k = 0; k < r; ++k) {
            const int j = i * r + k;
            s += 0.5 * (f.values[j] + f.values[j + 1]);
        }
        out[i] = s / r;
    }
    return CellFunction(target, std::move(out));
}

CellFunction project_avg(const std::function<double(double)>& f, const Partition& target) {
    // 3-point Gauss-Legendre per cell
    static const double gp[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    Eigen::VectorXd out(target.n_cells());
    for (int i = 0; i < target.n_cells(); ++i) {
        const double a = target.cell_left(i), b = target.cell_right(i);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int q = 0; q < 3; ++q) s += gw[q] * f(mid + half * gp[q]);
        out[i] = 0.5 * s; // divide by |Q_i| after scaling by half
    }
    return CellFunction(target, std::move(out));
}

double tv(const CellFunction& w) {
    double s = 0.0;
    for (int i = 0; i + 1 < w.values.size(); ++i) s += std::abs(w.values[i + 1] - w.values[i]);
    return s;
}

double norm_l1(const CellFunction& f) { return f.part.h() * f.values.cwiseAbs().sum(); }

double norm_l2(const CellFunction& f) { return std::sqrt(f.part.h() * f.values.squaredNorm()); }

double norm_linf(const CellFunction& f) { return f.values.cwiseAbs().maxCoeff(); }

double norm_l2(const NodalFunction& f) {
    // exact: per cell h/3 (a^2 + a b + b^2)
    const double h = f.part.h();
    double s = 0.0;
    for (int i = 0; i < f.part.n_cells(); ++i) {
        const double a = f.values[i], b = f.values[i + 1];
        s += h / 3.0 * (a * a + a * b + b * b);
    }
    return std::sqrt(s);
}

double norm_linf(const NodalFunction& f) { return f.values.cwiseAbs().maxCoeff(); }

double integrate_p1_pc(const NodalFunction& phi, const CellFunction& psi) {
    const int r = ratio_or_throw(phi.part, psi.part);
    const double h = phi.part.h();
    double s = 0.0;
    for (int i = 0; i < psi.part.n_cells(); ++i) {
        double cell = 0.0;
        for (int k = 0; k < r; ++k) {
            const int j = i * r + k;
            cell += 0.5 * h * (phi.values[j] + phi.values[j + 1]);
        }
        s += psi.values[i] * cell;
    }
    return s;
}

double l2_diff_p1_pc(const NodalFunction& phi, const CellFunction& psi) {
    const int r = ratio_or_throw(phi.part, psi.part);
    const double h = phi.part.h();
    double s = 0.0;
    for (int i = 0; i < psi.part.n_cells(); ++i) {
        const double c = psi.values[i];
        for (int k = 0; k < r; ++k) {
            const int j = i * r + k;
            const double a = phi.values[j] - c, b = phi.values[j + 1] - c;
            s += h / 3.0 * (a * a + a * b + b * b);
        }
    }
    return std::sqrt(s);
}

double l1_diff(const CellFunction& a, const CellFunction& b) {
    const bool a_fine = b.part.divides(a.part);
    const CellFunction& fine = a_fine ? a : b;
    const CellFunction& coarse = a_fine ? b : a;
    const int r = ratio_or_throw(fine.part, coarse.part);
    const double h = fine.part.h();
    double s = 0.0;
    for (int i = 0; i < coarse.part.n_cells(); ++i)
        for (int k = 0; k < r; ++k) s += h * std::abs(fine.values[i * r + k] - coarse.values[i]);
    return s;
}

} // namespace mcc
