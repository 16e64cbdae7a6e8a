#include "mcc/qp.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

namespace mcc {

namespace {

using Triplet = Eigen::Triplet<double>;

double clip_inf(double v) { return std::clamp(v, -kInf, kInf); }

bool is_neg_inf(double v) { return v <= -0.5 * kInf; }
bool is_pos_inf(double v) { return v >= 0.5 * kInf; }

Eigen::VectorXd col_inf_norms(const SpMat& M) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(M.cols());
    for (int k = 0; k < M.outerSize(); ++k)
        for (SpMat::InnerIterator it(M, k); it; ++it)
            out[it.col()] = std::max(out[it.col()], std::abs(it.value()));
    return out;
}

Eigen::VectorXd row_inf_norms(const SpMat& M) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(M.rows());
    for (int k = 0; k < M.outerSize(); ++k)
        for (SpMat::InnerIterator it(M, k); it; ++it)
            out[it.row()] = std::max(out[it.row()], std::abs(it.value()));
    return out;
}

double safe_scale(double nrm) { return nrm < 1e-12 ? 1.0 : 1.0 / std::sqrt(nrm); }

} // namespace

void SparseQP::validate() const {
    const int n = num_vars();
    const int m = num_rows();
    if (P.rows() != n || P.cols() != n) throw SpecMismatch("P dimension mismatch");
    if (A.cols() != n || A.rows() != m || u.size() != m) throw SpecMismatch("A/l/u dimension mismatch");
    for (int i = 0; i < m; ++i)
        if (l[i] > u[i]) throw SpecMismatch("constraint bounds cross (l > u)");
    // PSD probe: Cholesky of P + delta I must succeed
    SpMat probe = P;
    SpMat id(n, n);
    id.setIdentity();
    probe += 1e-12 * id;
    Eigen::SimplicialLLT<SpMat> llt(probe);
    if (llt.info() != Eigen::Success) throw SpecMismatch("quadratic cost is not positive semidefinite");
}

QpSolver::QpSolver(SparseQP qp, SolveSettings settings) : qp_(std::move(qp)), st_(settings) {
    qp_.validate();
    mu_cur_ = st_.prox_mu;
    for (int i = 0; i < qp_.num_rows(); ++i) {
        qp_.l[i] = clip_inf(qp_.l[i]);
        qp_.u[i] = clip_inf(qp_.u[i]);
    }
    build_scaling();
    build_kkt();
    xs_ = Eigen::VectorXd::Zero(qp_.num_vars());
    ys_ = Eigen::VectorXd::Zero(qp_.num_rows());
    zs_ = Eigen::VectorXd::Zero(qp_.num_rows());
}

void QpSolver::build_scaling() {
    const int n = qp_.num_vars();
    const int m = qp_.num_rows();
    d_ = Eigen::VectorXd::Ones(n);
    e_ = Eigen::VectorXd::Ones(m);
    cost_scale_ = 1.0;
    Ps_ = qp_.P;
    As_ = qp_.A;
    qs_ = qp_.q;

    if (st_.scaling) {
        for (int iter = 0; iter < st_.scaling_iters; ++iter) {
            Eigen::VectorXd cp = col_inf_norms(Ps_);
            Eigen::VectorXd ca = col_inf_norms(As_);
            Eigen::VectorXd ra = row_inf_norms(As_);
            Eigen::VectorXd dd(n), ee(m);
            for (int j = 0; j < n; ++j) dd[j] = safe_scale(std::max(cp[j], ca[j]));
            for (int i = 0; i < m; ++i) ee[i] = safe_scale(ra[i]);
            Ps_ = dd.asDiagonal() * Ps_ * dd.asDiagonal();
            As_ = ee.asDiagonal() * As_ * dd.asDiagonal();
            qs_ = dd.cwiseProduct(qs_);
            d_ = d_.cwiseProduct(dd);
            e_ = e_.cwiseProduct(ee);
            // cost normalization
            Eigen::VectorXd cpn = col_inf_norms(Ps_);
            const double pmean = n > 0 ? cpn.sum() / n : 0.0;
            const double qnrm = qs_.lpNorm<Eigen::Infinity>();
            const double denom = std::max(pmean, qnrm);
            if (denom > 1e-12) {
                const double g = 1.0 / denom;
                Ps_ *= g;
                qs_ *= g;
                cost_scale_ *= g;
            }
        }
    }
    ls_.resize(m);
    us_.resize(m);
    for (int i = 0; i < m; ++i) {
        ls_[i] = is_neg_inf(qp_.l[i]) ? -kInf : e_[i] * qp_.l[i];
        us_[i] = is_pos_inf(qp_.u[i]) ? kInf : e_[i] * qp_.u[i];
    }
    rho_vec_.resize(m);
    for (int i = 0; i < m; ++i) {
        const bool eq = !is_neg_inf(qp_.l[i]) && !is_pos_inf(qp_.u[i]) && (qp_.u[i] - qp_.l[i]) < 1e-14;
        rho_vec_[i] = eq ? st_.rho * st_.rho_eq_scale : st_.rho;
    }
    rho_inv_ = rho_vec_.cwiseInverse();
}

void QpSolver::build_kkt() {
    const int n = qp_.num_vars();
    const int m = qp_.num_rows();
    std::vector<Triplet> trip;
    trip.reserve(Ps_.nonZeros() + As_.nonZeros() + n + m);
    for (int k = 0; k < Ps_.outerSize(); ++k)
        for (SpMat::InnerIterator it(Ps_, k); it; ++it)
            if (it.row() <= it.col()) trip.emplace_back(it.row(), it.col(), it.value());
    for (int j = 0; j < n; ++j) trip.emplace_back(j, j, st_.sigma + mu_cur_);
    for (int k = 0; k < As_.outerSize(); ++k)
        for (SpMat::InnerIterator it(As_, k); it; ++it)
            trip.emplace_back(it.col(), n + it.row(), it.value()); // A^T block (upper)
    for (int i = 0; i < m; ++i) trip.emplace_back(n + i, n + i, -rho_inv_[i]);
    kkt_.resize(n + m, n + m);
    kkt_.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
        ldlt_.analyzePattern(kkt_);
        analyzed_ = true;
    }
    refactorize();
}

void QpSolver::refactorize() {
    ldlt_.factorize(kkt_);
    if (ldlt_.info() != Eigen::Success) throw SingularSystem("KKT factorization failed");
}

void QpSolver::set_objective(const Eigen::VectorXd& q) {
    if (q.size() != qp_.q.size()) throw SpecMismatch("objective size mismatch");
    qp_.q = q;
    qs_ = cost_scale_ * d_.cwiseProduct(q);
}

void QpSolver::set_bounds(const Eigen::VectorXd& l, const Eigen::VectorXd& u) {
    if (l.size() != qp_.l.size() || u.size() != qp_.u.size()) throw SpecMismatch("bounds size mismatch");
    qp_.l = l;
    qp_.u = u;
    for (int i = 0; i < qp_.num_rows(); ++i) {
        qp_.l[i] = clip_inf(qp_.l[i]);
        qp_.u[i] = clip_inf(qp_.u[i]);
        if (qp_.l[i] > qp_.u[i]) throw SpecMismatch("constraint bounds cross (l > u)");
        ls_[i] = is_neg_inf(qp_.l[i]) ? -kInf : e_[i] * qp_.l[i];
        us_[i] = is_pos_inf(qp_.u[i]) ? kInf : e_[i] * qp_.u[i];
    }
}

void QpSolver::update_matrix_values(const SpMat& A_new) {
    if (A_new.rows() != qp_.A.rows() || A_new.cols() != qp_.A.cols() || A_new.nonZeros() != qp_.A.nonZeros())
        throw SpecMismatch("matrix update must keep the sparsity pattern");
    qp_.A = A_new;
    As_ = e_.asDiagonal() * qp_.A * d_.asDiagonal();
    build_kkt();
}

void QpSolver::clear_warm_start() {
    xs_.setZero();
    ys_.setZero();
    zs_.setZero();
    have_warm_ = false;
}

void QpSolver::warm_start(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    xs_ = x.cwiseQuotient(d_);
    ys_ = cost_scale_ * y.cwiseQuotient(e_);
    zs_ = e_.cwiseProduct(z);
    have_warm_ = true;
}

void QpSolver::compute_residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                                 double* prim, double* dual) const {
    *prim = (qp_.A * x - z).lpNorm<Eigen::Infinity>();
    *dual = (qp_.P * x + qp_.q + qp_.A.transpose() * y).lpNorm<Eigen::Infinity>();
}

bool QpSolver::try_polish(SolveReport& rep, const Eigen::VectorXd& q_eff, double obj_admm) {
    const int n = qp_.num_vars();
    const int m = qp_.num_rows();
    const double delta = 1e-9;
    const double mu = mu_cur_;

    // active-set guess from the ADMM iterate: equality rows always, bound
    // rows by strict dual sign (the projection step leaves exact zeros on
    // inactive rows); -1 inactive, 0 lower, 1 upper. Rows the guess misses
    // are picked up by the repair loop.
    const double y_dust = 1e-12 * std::max(1.0, ys_.lpNorm<Eigen::Infinity>());
    std::vector<int> side(m, -1);
    for (int i = 0; i < m; ++i) {
        const bool is_eq = !is_neg_inf(ls_[i]) && !is_pos_inf(us_[i]) && us_[i] - ls_[i] < 1e-14;
        if (is_eq)
            side[i] = 0;
        else if (ys_[i] < -y_dust && !is_neg_inf(ls_[i]))
            side[i] = 0;
        else if (ys_[i] > y_dust && !is_pos_inf(us_[i]))
            side[i] = 1;
    }

    if (st_.verbose) {
        const Eigen::VectorXd adm = As_ * xs_;
        double worst = 0.0;
        int worst_i = -1;
        for (int i = 0; i < m; ++i) {
            if (side[i] < 0) continue;
            const double s = std::abs(adm[i] - (side[i] == 0 ? ls_[i] : us_[i]));
            if (s > worst) {
                worst = s;
                worst_i = i;
            }
        }
        std::fprintf(stderr, "  polish detect: worst pinned-row slack %.3e at row %d (y=%.3e)\n", worst,
                     worst_i, worst_i >= 0 ? ys_[worst_i] : 0.0);
    }

    for (int round = 0; round < 8; ++round) {
        std::vector<int> act;
        std::vector<double> act_b;
        act.reserve(m);
        for (int i = 0; i < m; ++i)
            if (side[i] >= 0) {
                act.push_back(i);
                act_b.push_back(side[i] == 0 ? ls_[i] : us_[i]);
            }
        const int ma = static_cast<int>(act.size());

        std::vector<Triplet> trip;
        for (int k = 0; k < Ps_.outerSize(); ++k)
            for (SpMat::InnerIterator it(Ps_, k); it; ++it)
                if (it.row() <= it.col()) trip.emplace_back(it.row(), it.col(), it.value());
        for (int j = 0; j < n; ++j) trip.emplace_back(j, j, mu + delta);
        std::vector<int> rowmap(m, -1);
        for (int a = 0; a < ma; ++a) rowmap[act[a]] = a;
        for (int k = 0; k < As_.outerSize(); ++k)
            for (SpMat::InnerIterator it(As_, k); it; ++it) {
                const int a = rowmap[it.row()];
                if (a >= 0) trip.emplace_back(it.col(), n + a, it.value());
            }
        for (int a = 0; a < ma; ++a) trip.emplace_back(n + a, n + a, -delta);

        SpMat kp(n + ma, n + ma);
        kp.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLDLT<SpMat, Eigen::Upper, Eigen::AMDOrdering<int>> fac;
        fac.compute(kp);
        if (fac.info() != Eigen::Success) return false;

        Eigen::VectorXd rhs(n + ma);
        rhs.head(n) = -q_eff;
        for (int a = 0; a < ma; ++a) rhs[n + a] = act_b[a];

        // refinement removes only the delta terms; the inner problem itself
        // is strongly convex through mu
        Eigen::VectorXd sol = fac.solve(rhs);
        for (int it_ref = 0; it_ref < 4; ++it_ref) {
            Eigen::VectorXd r = rhs - kp.selfadjointView<Eigen::Upper>() * sol;
            r.head(n) += delta * sol.head(n);
            r.tail(ma) -= delta * sol.tail(ma);
            sol += fac.solve(r);
        }

        // residuals of the inner (scaled, proximally shifted) problem
        Eigen::VectorXd ycand_s = Eigen::VectorXd::Zero(m);
        for (int a = 0; a < ma; ++a) ycand_s[act[a]] = sol[n + a];
        const Eigen::VectorXd xs = sol.head(n);
        const Eigen::VectorXd as_x = As_ * xs;
        Eigen::VectorXd zcand_s = as_x.cwiseMax(ls_).cwiseMin(us_);
        const double prim_s = (as_x - zcand_s).lpNorm<Eigen::Infinity>();
        const double dual_s =
            (Ps_.selfadjointView<Eigen::Upper>() * xs + mu * xs + q_eff + As_.transpose() * ycand_s)
                .lpNorm<Eigen::Infinity>();
        const double obj_cand = 0.5 * xs.dot(Ps_.selfadjointView<Eigen::Upper>() * xs) +
                                0.5 * mu * xs.squaredNorm() + q_eff.dot(xs);

        int added = 0;
        for (int i = 0; i < m; ++i) {
            if (side[i] >= 0) continue;
            const double margin = 1e-11 * std::max(1.0, std::abs(as_x[i]));
            if (!is_neg_inf(ls_[i]) && as_x[i] < ls_[i] - margin) {
                side[i] = 0;
                ++added;
            } else if (!is_pos_inf(us_[i]) && as_x[i] > us_[i] + margin) {
                side[i] = 1;
                ++added;
            }
        }

        if (st_.verbose)
            std::fprintf(stderr, "  polish round %d: act=%d added=%d prim_s=%.3e dual_s=%.3e dobj=%.3e\n",
                         round, ma, added, prim_s, dual_s, obj_cand - obj_admm);

        const double obj_tol = 1e-5 * (1.0 + std::abs(obj_admm));
        if (prim_s <= 1e-11 && dual_s <= 1e-11 && std::abs(obj_cand - obj_admm) <= obj_tol) {
            xs_ = xs;
            ys_ = ycand_s;
            zs_ = zcand_s;
            rep.polished = true;
            return true;
        }
        if (added == 0) {
            // release wrong-signed multipliers and retry once more
            const double ymax = ma ? sol.tail(ma).lpNorm<Eigen::Infinity>() : 0.0;
            const double ytol = 1e-9 * std::max(1.0, ymax);
            int dropped = 0;
            for (int a = 0; a < ma; ++a) {
                const int i = act[a];
                const bool is_eq = !is_neg_inf(ls_[i]) && !is_pos_inf(us_[i]) && us_[i] - ls_[i] < 1e-14;
                if (is_eq) continue;
                if ((side[i] == 0 && sol[n + a] > ytol) || (side[i] == 1 && sol[n + a] < -ytol)) {
                    side[i] = -1;
                    ++dropped;
                }
            }
            if (dropped == 0) return false;
        }
    }
    return false;
}

void QpSolver::inner_residuals(const Eigen::VectorXd& q_eff, const Eigen::VectorXd& xs,
                               const Eigen::VectorXd& ys, const Eigen::VectorXd& zs, double* prim,
                               double* dual) const {
    *prim = (As_ * xs - zs).lpNorm<Eigen::Infinity>();
    *dual = (Ps_.selfadjointView<Eigen::Upper>() * xs + mu_cur_ * xs + q_eff + As_.transpose() * ys)
                .lpNorm<Eigen::Infinity>();
}

SolveReport QpSolver::solve() {
    const int n = qp_.num_vars();
    const int m = qp_.num_rows();
    SolveReport rep;
    rep.x = Eigen::VectorXd::Zero(n);
    rep.y = Eigen::VectorXd::Zero(m);
    rep.z = Eigen::VectorXd::Zero(m);

    Eigen::VectorXd rhs(n + m), sol(n + m), ztil(m), zrel(m);
    const double eps_inf = 1e-9;
    int total_iters = 0;
    bool done = false;

    Eigen::VectorXd x_prox = xs_;
    if (mu_cur_ != st_.prox_mu) {
        mu_cur_ = st_.prox_mu;
        build_kkt();
    }
    for (int outer = 0; outer < st_.max_outer && !done && total_iters < st_.max_iter; ++outer) {
        if (outer > 0 && mu_cur_ > st_.prox_mu_min) {
            mu_cur_ = std::max(st_.prox_mu * std::pow(st_.prox_shrink, outer), st_.prox_mu_min);
            build_kkt();
        }
        const Eigen::VectorXd q_eff = qs_ - mu_cur_ * x_prox;
        Eigen::VectorXd ys_prev_check = ys_;
        double polish_stage = std::max(1e-5, st_.eps_prim);
        bool inner_done = false;

        while (!inner_done && total_iters < st_.max_iter) {
            ++total_iters;
            rhs.head(n) = st_.sigma * xs_ - q_eff;
            rhs.tail(m) = zs_ - ys_.cwiseProduct(rho_inv_);
            sol = ldlt_.solve(rhs);
            ztil = zs_ + (sol.tail(m) - ys_).cwiseProduct(rho_inv_);
            xs_ = st_.over_relax * sol.head(n) + (1.0 - st_.over_relax) * xs_;
            zrel = st_.over_relax * ztil + (1.0 - st_.over_relax) * zs_;
            zs_ = (zrel + ys_.cwiseProduct(rho_inv_)).cwiseMax(ls_).cwiseMin(us_);
            ys_ = ys_ + rho_vec_.cwiseProduct(zrel - zs_);

            if (total_iters % st_.check_every != 0) continue;

            double prim_s, dual_s;
            inner_residuals(q_eff, xs_, ys_, zs_, &prim_s, &dual_s);
            if (st_.verbose && total_iters % (st_.check_every * 200) == 0)
                std::fprintf(stderr, "outer %d k=%d inner prim=%.3e dual=%.3e\n", outer, total_iters, prim_s,
                             dual_s);

            if (prim_s <= polish_stage && dual_s <= polish_stage) {
                const double obj_admm = 0.5 * xs_.dot(Ps_.selfadjointView<Eigen::Upper>() * xs_) +
                                        0.5 * mu_cur_ * xs_.squaredNorm() + q_eff.dot(xs_);
                if (st_.polish && try_polish(rep, q_eff, obj_admm)) {
                    inner_done = true;
                    break;
                }
                polish_stage = std::max(polish_stage * 0.1, 1e-12);
                if (prim_s <= 1e-11 && dual_s <= 1e-11) inner_done = true; // admm alone is enough
            }

            // primal infeasibility certificate from the dual update direction
            Eigen::VectorXd dy = e_.cwiseProduct(ys_ - ys_prev_check) / cost_scale_;
            const double dy_norm = dy.lpNorm<Eigen::Infinity>();
            if (dy_norm > 1e-14) {
                const double at_dy = (qp_.A.transpose() * dy).lpNorm<Eigen::Infinity>();
                if (at_dy <= eps_inf * dy_norm) {
                    double support = 0.0;
                    bool valid = true;
                    for (int i = 0; i < m && valid; ++i) {
                        const double p = std::max(dy[i], 0.0), q2 = std::min(dy[i], 0.0);
                        if (p > eps_inf * dy_norm && is_pos_inf(qp_.u[i])) valid = false;
                        if (-q2 > eps_inf * dy_norm && is_neg_inf(qp_.l[i])) valid = false;
                        if (valid) support += (is_pos_inf(qp_.u[i]) ? 0.0 : qp_.u[i] * p) +
                                              (is_neg_inf(qp_.l[i]) ? 0.0 : qp_.l[i] * q2);
                    }
                    if (valid && support <= -eps_inf * dy_norm) {
                        rep.x = d_.cwiseProduct(xs_);
                        rep.y = e_.cwiseProduct(ys_) / cost_scale_;
                        rep.z = zs_.cwiseQuotient(e_);
                        rep.status = SolveStatus::Infeasible;
                        rep.iters = total_iters;
                        have_warm_ = true;
                        rep.obj = 0.5 * rep.x.dot(qp_.P * rep.x) + qp_.q.dot(rep.x);
                        return rep;
                    }
                }
            }
            ys_prev_check = ys_;
        }

        // outer update and true residual check
        x_prox = xs_;
        Eigen::VectorXd x = d_.cwiseProduct(xs_);
        Eigen::VectorXd y = e_.cwiseProduct(ys_) / cost_scale_;
        Eigen::VectorXd z = zs_.cwiseQuotient(e_);
        double prim, dual;
        compute_residuals(x, y, z, &prim, &dual);
        rep.x = std::move(x);
        rep.y = std::move(y);
        rep.z = std::move(z);
        rep.prim_res = prim;
        rep.dual_res = dual;
        rep.iters = total_iters;
        if (st_.verbose)
            std::fprintf(stderr, "outer %d done k=%d true prim=%.3e dual=%.3e\n", outer, total_iters, prim,
                         dual);
        if (prim <= st_.eps_prim && dual <= st_.eps_dual) {
            rep.status = SolveStatus::Optimal;
            done = true;
        }
    }

    if (!done && rep.status != SolveStatus::Infeasible) rep.status = SolveStatus::MaxIter;
    have_warm_ = true;
    rep.obj = 0.5 * rep.x.dot(qp_.P * rep.x) + qp_.q.dot(rep.x);
    return rep;
}

SolveReport solve(const SparseQP& qp, const SolveSettings& settings) {
    QpSolver solver(qp, settings);
    return solver.solve();
}

SolveReport solve_lp_objective_swap(const SparseQP& qp, const Eigen::VectorXd& new_q,
                                    const SolveReport& warm, const SolveSettings& settings) {
    SparseQP swapped = qp;
    swapped.q = new_q;
    QpSolver solver(swapped, settings);
    if (warm.x.size() == qp.q.size() && warm.y.size() == qp.l.size())
        solver.warm_start(warm.x, warm.y, warm.z);
    return solver.solve();
}

void dump_problem(const SparseQP& qp, std::ostream& os) {
    long long nnzp = 0;
    for (int kcol = 0; kcol < qp.P.outerSize(); ++kcol)
        for (SpMat::InnerIterator it(qp.P, kcol); it; ++it)
            if (it.row() <= it.col()) ++nnzp;
    os << "mccqp " << qp.num_vars() << ' ' << qp.num_rows() << ' ' << nnzp << ' '
       << qp.A.nonZeros() << '\n';
    os << std::setprecision(17);
    for (int kcol = 0; kcol < qp.P.outerSize(); ++kcol)
        for (SpMat::InnerIterator it(qp.P, kcol); it; ++it)
            if (it.row() <= it.col()) os << "P " << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    for (int j = 0; j < qp.num_vars(); ++j) os << "q " << j << ' ' << qp.q[j] << '\n';
    for (int kcol = 0; kcol < qp.A.outerSize(); ++kcol)
        for (SpMat::InnerIterator it(qp.A, kcol); it; ++it)
            os << "A " << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    for (int i = 0; i < qp.num_rows(); ++i) os << "b " << i << ' ' << qp.l[i] << ' ' << qp.u[i] << '\n';
}

SparseQP read_problem(std::istream& is) {
    std::string tag;
    int n, m;
    long long nnzp, nnza;
    is >> tag >> n >> m >> nnzp >> nnza;
    if (tag != "mccqp") throw SpecMismatch("bad problem dump header");
    SparseQP qp;
    std::vector<Triplet> pt, at;
    qp.q = Eigen::VectorXd::Zero(n);
    qp.l = Eigen::VectorXd::Zero(m);
    qp.u = Eigen::VectorXd::Zero(m);
    while (is >> tag) {
        if (tag == "P") {
            int i, j;
            double v;
            is >> i >> j >> v;
            pt.emplace_back(i, j, v);
            if (i != j) pt.emplace_back(j, i, v);
        } else if (tag == "q") {
            int j;
            is >> j;
            is >> qp.q[j];
        } else if (tag == "A") {
            int i, j;
            double v;
            is >> i >> j >> v;
            at.emplace_back(i, j, v);
        } else if (tag == "b") {
            int i;
            is >> i;
            is >> qp.l[i] >> qp.u[i];
        } else {
            throw SpecMismatch("bad problem dump row tag: " + tag);
        }
    }
    qp.P.resize(n, n);
    qp.P.setFromTriplets(pt.begin(), pt.end());
    qp.A.resize(m, n);
    qp.A.setFromTriplets(at.begin(), at.end());
    return qp;
}

} // namespace mcc
