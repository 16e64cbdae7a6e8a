#include "mcc/obbt.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>
#include <vector>

namespace mcc {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// The OBBT subproblems range over the feasible set in (u, w, z) only; the tv
// epigraph block is objective plumbing and is sliced away.
struct LpView {
    int rows, cols;
    SparseQP qp;

    LpView(const BuiltRelaxation& full) : rows(full.map.tv_row()), cols(full.map.t_off()) {
        qp.P = SpMat(cols, cols);
        qp.q = Eigen::VectorXd::Zero(cols);
        qp.A = full.qp.A.topLeftCorner(rows, cols);
        qp.l = full.qp.l.head(rows);
        qp.u = full.qp.u.head(rows);
    }

    void refresh_from(const BuiltRelaxation& full) {
        qp.A = full.qp.A.topLeftCorner(rows, cols);
        qp.l = full.qp.l.head(rows);
        qp.u = full.qp.u.head(rows);
    }
};

Eigen::VectorXd cell_avg_objective(const FemOperators& ops, const VariableMap& map, int n_obj_vars, int cell,
                                   double sign) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n_obj_vars);
    SpMat Rt = ops.avg_map.transpose();
    for (SpMat::InnerIterator it(Rt, cell); it; ++it) q[map.u_off() + it.row()] = sign * it.value();
    return q;
}

struct LpOutcome {
    double value = 0.0;
    int iters = 0;
};

LpOutcome run_obbt_lp(QpSolver& solver, const Eigen::VectorXd& q, double sign) {
    solver.set_objective(q);
    SolveReport rep = solver.solve();
    if (rep.status == SolveStatus::Infeasible)
        throw InfeasibleEnvelope("obbt subproblem reported infeasible (safeguard too small)");
    if (rep.status != SolveStatus::Optimal)
        throw SingularSystem("obbt subproblem did not reach optimality");
    return LpOutcome{sign * rep.obj, rep.iters};
}

} // namespace

ObbtResult tighten(const RelaxationSpec& spec, const ObbtSettings& settings) {
    spec.validate();
    if (!(settings.safeguard > 0.0)) throw SpecMismatch("obbt safeguard must be positive");
    if (!(settings.sweep_tol > settings.safeguard)) throw SpecMismatch("sweep tolerance must exceed the safeguard");

    RelaxationSpec cur = spec;
    FemOperators ops = FemOperators::assemble(cur.prob.fem_grid, cur.env.coarse);
    const int n_cells = cur.env.coarse.n_cells();

    BuiltRelaxation full = build(cur);
    LpView lp(full);
    QpSolver lp_solver(lp.qp, settings.lp);

    BuiltRelaxation qp_built = build(cur);
    QpSolver qp_solver(qp_built.qp, settings.lp);

    ObbtTrace trace;
    const double t0 = now_seconds();

    auto refresh_lp = [&]() {
        refresh_envelope(cur, full);
        lp.refresh_from(full);
        lp_solver.update_matrix_values(lp.qp.A);
        lp_solver.set_bounds(lp.qp.l, lp.qp.u);
    };

    auto apply_bound = [&](int sweep, char side, int cell, double lp_value) {
        double& slot = side == 'l' ? cur.env.u_lo.values[cell] : cur.env.u_hi.values[cell];
        const double old = slot;
        const double nb = side == 'l' ? lp_value - settings.safeguard : lp_value + settings.safeguard;
        slot = nb;
        if (cur.env.u_lo.values[cell] > cur.env.u_hi.values[cell])
            throw InfeasibleEnvelope("obbt bounds crossed");
        trace.updates.push_back(ObbtUpdate{sweep, side, cell, old, lp_value, nb});
        return std::abs(nb - old);
    };

    for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
        double max_move = 0.0;

        if (!settings.parallel_sweep) {
            for (const char side : {'l', 'u'}) {
                const double sign = side == 'l' ? 1.0 : -1.0;
                for (int i = 0; i < n_cells; ++i) {
                    LpOutcome out =
                        run_obbt_lp(lp_solver, cell_avg_objective(ops, full.map, lp.cols, i, sign), sign);
                    ++trace.lp_solves;
                    trace.lp_iterations += out.iters;
                    max_move = std::max(max_move, apply_bound(sweep, side, i, out.value));
                    refresh_lp();
                }
            }
        } else {
            // pass-start envelope for every cell; merged afterwards in index order
            const int nt = std::max(1, settings.threads);
            std::vector<LpOutcome> lo(n_cells), hi(n_cells);
            std::vector<std::thread> pool;
            std::vector<std::string> errors(nt);
            for (int t = 0; t < nt; ++t) {
                pool.emplace_back([&, t]() {
                    try {
                        QpSolver local(lp.qp, settings.lp);
                        for (int k = t; k < 2 * n_cells; k += nt) {
                            const int cell = k % n_cells;
                            const double sign = k < n_cells ? 1.0 : -1.0;
                            LpOutcome out =
                                run_obbt_lp(local, cell_avg_objective(ops, full.map, lp.cols, cell, sign), sign);
                            (k < n_cells ? lo[cell] : hi[cell]) = out;
                        }
                    } catch (const std::exception& e) {
                        errors[t] = e.what();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& err : errors)
                if (!err.empty()) throw InfeasibleEnvelope(err);
            for (int i = 0; i < n_cells; ++i) {
                ++trace.lp_solves;
                trace.lp_iterations += lo[i].iters;
                max_move = std::max(max_move, apply_bound(sweep, 'l', i, lo[i].value));
            }
            for (int i = 0; i < n_cells; ++i) {
                ++trace.lp_solves;
                trace.lp_iterations += hi[i].iters;
                max_move = std::max(max_move, apply_bound(sweep, 'u', i, hi[i].value));
            }
            refresh_lp();
        }

        double m = std::numeric_limits<double>::quiet_NaN();
        if (settings.record_objective) {
            refresh_envelope(cur, qp_built);
            qp_solver.update_matrix_values(qp_built.qp.A);
            qp_solver.set_bounds(qp_built.qp.l, qp_built.qp.u);
            SolveReport rep = qp_solver.solve();
            if (rep.status == SolveStatus::Optimal) m = rep.obj + qp_built.obj_constant;
        }
        trace.sweeps.push_back(ObbtSweepRecord{sweep, max_move, m, now_seconds() - t0});

        if (max_move <= settings.sweep_tol) break;
    }

    return ObbtResult{cur.env, std::move(trace)};
}

ObbtBoundResult lower_bound_after_obbt(const RelaxationSpec& spec, const ObbtSettings& settings) {
    ObbtResult tightened = tighten(spec, settings);
    RelaxationSpec post = spec;
    post.env = tightened.env;
    LowerBoundResult lb = lower_bound_solve(post, settings.lp);
    return ObbtBoundResult{lb.m, std::move(tightened.env), std::move(tightened.trace), lb.report};
}

void export_trace_csv(const ObbtTrace& trace, std::ostream& os) {
    os << "sweep,side,cell,old_bound,lp_value,new_bound\n";
    os << std::setprecision(16);
    for (const auto& u : trace.updates)
        os << u.sweep << ',' << u.side << ',' << u.cell << ',' << u.old_bound << ',' << u.lp_value << ','
           << u.new_bound << '\n';
}

} // namespace mcc
