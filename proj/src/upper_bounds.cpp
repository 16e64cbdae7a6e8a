#include "mcc/upper_bounds.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <vector>

namespace mcc {

namespace {

// cached assembly and factorization for repeated averaged-state solves on a
// fixed control grid
struct AvgWorkspace {
    const PdeProblem& prob;
    Partition grid;
    FemOperators ops;
    Eigen::VectorXd F;
    Eigen::VectorXd ud_load;
    SpMat A;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt;
    bool analyzed = false;

    AvgWorkspace(const PdeProblem& p, const Partition& g, const NodalFunction& u_d)
        : prob(p), grid(g), ops(FemOperators::assemble(p.fem_grid, g)),
          F(load_from_cells(p.fem_grid, p.f)), ud_load(load_from_nodal(p.fem_grid, u_d.values)) {}

    void factorize(const Eigen::VectorXd& w) {
        SpMat D(w.size(), w.size());
        std::vector<Eigen::Triplet<double>> t;
        for (int i = 0; i < w.size(); ++i) t.emplace_back(i, i, w[i]);
        D.setFromTriplets(t.begin(), t.end());
        A = ops.stiffness + SpMat(ops.cell_load * D * ops.avg_map);
        if (!analyzed) {
            ldlt.analyzePattern(A);
            analyzed = true;
        }
        ldlt.factorize(A);
        if (ldlt.info() != Eigen::Success) throw SingularSystem("averaged operator factorization failed");
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd x = ldlt.solve(rhs);
        x += ldlt.solve(rhs - A * x);
        return x;
    }
};

double tv_of(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (int i = 0; i + 1 < w.size(); ++i) s += std::abs(w[i + 1] - w[i]);
    return s;
}

double huber_tv_of(const Eigen::VectorXd& w, double eps) {
    double s = 0.0;
    for (int i = 0; i + 1 < w.size(); ++i) s += huber(w[i + 1] - w[i], eps);
    return s;
}

} // namespace

PrimalResult solve_continuous(const PdeProblem& prob, const NodalFunction& u_d, double alpha,
                              const Partition& grid, const ContinuousSettings& st) {
    if (!grid.divides(prob.fem_grid)) throw IncompatibleGrids("control grid does not divide the fem grid");
    AvgWorkspace ws(prob, grid, u_d);
    const int nw = grid.n_cells();
    const int n = prob.fem_grid.n_cells() - 1;
    const double H = grid.h();

    auto state = [&]() { return ws.solve(ws.F); };
    auto track = [&](const Eigen::VectorXd& ui) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 2);
        full.segment(1, n) = ui;
        return tracking_value(NodalFunction(prob.fem_grid, full), u_d);
    };

    Eigen::VectorXd w =
        Eigen::VectorXd::Constant(nw, st.start_at_midpoint ? 0.5 * (prob.w_lo + prob.w_hi) : st.start_value);
    ws.factorize(w);
    Eigen::VectorXd u = state();
    double fval = track(u) + alpha * huber_tv_of(w, st.eps_huber);

    double step = 1.0;
    Eigen::VectorXd g_prev, w_prev;
    int it = 0;
    for (it = 1; it <= st.max_iters; ++it) {
        // gradient of the smoothed reduced objective at w
        Eigen::VectorXd diff_full = Eigen::VectorXd::Zero(n + 2);
        diff_full.segment(1, n) = u;
        const Eigen::VectorXd p = ws.solve(load_from_nodal(prob.fem_grid, diff_full) - ws.ud_load);
        Eigen::VectorXd g = -((ws.ops.avg_map * u).array() * (ws.ops.avg_map * p).array() * H).matrix();
        for (int i = 0; i + 1 < nw; ++i) {
            const double hp = huber_prime(w[i + 1] - w[i], st.eps_huber);
            g[i] -= alpha * hp;
            g[i + 1] += alpha * hp;
        }

        // spectral (Barzilai-Borwein) initial step, safeguarded by Armijo backtracking
        if (it > 1) {
            const Eigen::VectorXd sv = w - w_prev, yv = g - g_prev;
            const double sy = sv.dot(yv);
            if (sy > 1e-16) step = std::min(1e8, std::max(1e-8, sv.squaredNorm() / sy));
        }
        w_prev = w;
        g_prev = g;

        bool accepted = false;
        Eigen::VectorXd wt, ut;
        double ft = 0.0;
        double s = step;
        for (int bt = 0; bt < 60; ++bt) {
            wt = (w - s * g).cwiseMax(prob.w_lo).cwiseMin(prob.w_hi);
            ws.factorize(wt);
            ut = state();
            ft = track(ut) + alpha * huber_tv_of(wt, st.eps_huber);
            if (ft <= fval - st.armijo * g.dot(w - wt)) {
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            ws.factorize(w); // restore factorization of the incumbent
            u = state();
            break;
        }
        const double move = (wt - w).norm();
        w = wt;
        u = ut;
        fval = ft;
        if (move < st.step_tol) break;
    }

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 2);
    full.segment(1, n) = u;
    NodalFunction un(prob.fem_grid, std::move(full));
    CellFunction wc(grid, w);
    const double j = tracking_value(un, u_d);
    return PrimalResult{std::move(wc), std::move(un), j + alpha * tv_of(w),
                        j + alpha * huber_tv_of(w, st.eps_huber), it};
}

namespace {

// incremental objective evaluation for integer moves through low-rank updates
struct IntegerSearch {
    AvgWorkspace ws;
    const NodalFunction& u_d;
    double alpha;
    double H;
    int nw, n;
    Eigen::VectorXd w;   // current integer control (stored as doubles)
    Eigen::VectorXd u;   // interior solution
    double obj;

    SpMat Rt;                          // avg_map transposed, column i = row i
    std::vector<Eigen::VectorXd> s_cache; // A^{-1} R_i^T per cell, lazily filled

    IntegerSearch(const PdeProblem& prob, const Partition& grid, const NodalFunction& ud, double a,
                  Eigen::VectorXd w0)
        : ws(prob, grid, ud), u_d(ud), alpha(a), H(grid.h()), nw(grid.n_cells()),
          n(prob.fem_grid.n_cells() - 1), w(std::move(w0)) {
        Rt = ws.ops.avg_map.transpose();
        s_cache.assign(nw, Eigen::VectorXd());
        refresh();
    }

    double track_of(const Eigen::VectorXd& ui) const {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 2);
        full.segment(1, n) = ui;
        return tracking_value(NodalFunction(ws.prob.fem_grid, full), u_d);
    }

    void refresh() {
        ws.factorize(w);
        u = ws.solve(ws.F);
        obj = track_of(u) + alpha * tv_of(w);
        for (auto& c : s_cache) c.resize(0);
    }

    Eigen::VectorXd row_vec(int i) const { return Eigen::VectorXd(Rt.col(i)); }

    const Eigen::VectorXd& s_col(int i) {
        if (s_cache[i].size() == 0) s_cache[i] = ws.solve(row_vec(i));
        return s_cache[i];
    }

    double tv_with(int i, double v) const {
        double s = tv_of(w);
        if (i > 0) s += std::abs(v - w[i - 1]) - std::abs(w[i] - w[i - 1]);
        if (i + 1 < nw) s += std::abs(w[i + 1] - v) - std::abs(w[i + 1] - w[i]);
        return s;
    }

    // objective after setting w[i] = v, via a rank-1 solve update
    double eval_single(int i, double v) {
        const double delta = (v - w[i]) * H;
        const Eigen::VectorXd& si = s_col(i);
        const Eigen::VectorXd r = row_vec(i);
        const double riu = r.dot(u);
        const double ris = r.dot(si);
        const double denom = 1.0 + delta * ris;
        if (std::abs(denom) < 1e-14) return std::numeric_limits<double>::infinity();
        const Eigen::VectorXd unew = u - (delta * riu / denom) * si;
        return track_of(unew) + alpha * tv_with(i, v);
    }
};

} // namespace

PrimalResult solve_integer(const PdeProblem& prob, const NodalFunction& u_d, double alpha,
                           const Partition& grid, const IntegerSettings& st) {
    PrimalResult relaxed = solve_continuous(prob, u_d, alpha, grid, st.relaxed);
    const double vlo = std::ceil(prob.w_lo - 1e-12);
    const double vhi = std::floor(prob.w_hi + 1e-12);
    if (vlo > vhi) throw SpecMismatch("no integer values inside the control box");

    Eigen::VectorXd w0(grid.n_cells());
    for (int i = 0; i < w0.size(); ++i)
        w0[i] = std::clamp(std::round(relaxed.w.values[i]), vlo, vhi);

    IntegerSearch search(prob, grid, u_d, alpha, w0);
    const double tol = 1e-12;

    int pass = 0;
    for (pass = 1; pass <= st.max_passes; ++pass) {
        bool improved = false;

        // single-cell integer moves, cell index ascending, values ascending
        for (int i = 0; i < search.nw; ++i) {
            search.s_col(i);
            for (double v = vlo; v <= vhi; v += 1.0) {
                if (v == search.w[i]) continue;
                const double cand = search.eval_single(i, v);
                if (cand < search.obj - tol * std::max(1.0, std::abs(search.obj))) {
                    search.w[i] = v;
                    search.refresh();
                    improved = true;
                    break;
                }
            }
        }

        // two-cell value swaps, lexicographic pair order
        for (int i = 0; i < search.nw; ++i) {
            for (int j = i + 1; j < search.nw; ++j) {
                if (search.w[i] == search.w[j]) continue;
                const Eigen::VectorXd& si = search.s_col(i);
                const Eigen::VectorXd& sj = search.s_col(j);
                const Eigen::VectorXd ri = search.row_vec(i);
                const Eigen::VectorXd rj = search.row_vec(j);
                const double di = (search.w[j] - search.w[i]) * search.H;
                const double dj = -di;
                Eigen::Matrix2d C;
                C << 1.0 + di * ri.dot(si), dj * ri.dot(sj), di * rj.dot(si), 1.0 + dj * rj.dot(sj);
                if (std::abs(C.determinant()) < 1e-14) continue;
                Eigen::Vector2d rhs(ri.dot(search.u), rj.dot(search.u));
                Eigen::Vector2d coef = C.inverse() * rhs;
                Eigen::VectorXd unew = search.u - di * coef[0] * si - dj * coef[1] * sj;

                Eigen::VectorXd wswap = search.w;
                std::swap(wswap[i], wswap[j]);
                const double cand = search.track_of(unew) + alpha * tv_of(wswap);
                if (cand < search.obj - tol * std::max(1.0, std::abs(search.obj))) {
                    search.w = wswap;
                    search.refresh();
                    improved = true;
                }
            }
        }

        if (!improved) break;
    }

    Eigen::VectorXd full = Eigen::VectorXd::Zero(search.n + 2);
    full.segment(1, search.n) = search.u;
    NodalFunction un(prob.fem_grid, std::move(full));
    CellFunction wc(grid, search.w);
    const double j = tracking_value(un, u_d);
    return PrimalResult{std::move(wc), std::move(un), j + alpha * tv_of(search.w),
                        j + alpha * huber_tv_of(search.w, st.relaxed.eps_huber), pass};
}

} // namespace mcc
