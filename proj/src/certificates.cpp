#include "mcc/certificates.hpp"

#include <cmath>

namespace mcc {

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kPiSq = kPi * kPi;

double max_abs_w(double w_lo, double w_hi) { return std::max(std::abs(w_lo), std::abs(w_hi)); }
} // namespace

double c1_coercivity(double w_lo) { return 1.0 + w_lo / kPiSq; }

double c2_coercivity(double w_lo, double w_hi) { return 1.0 - max_abs_w(w_lo, w_hi) / kPiSq; }

EmbeddingBounds embedding_bounds(double w_lo, double w_hi, double f_norm, CoercivityVariant variant) {
    const double c = variant == CoercivityVariant::PlainC1 ? c1_coercivity(w_lo) : c2_coercivity(w_lo, w_hi);
    if (!(c > 0.0)) throw CoercivityLost("coercivity constant is not positive");
    return EmbeddingBounds{f_norm / c, f_norm / (2.0 * c)};
}

double lipschitz_S(double w_lo, double w_hi, double f_norm) {
    const double c2 = c2_coercivity(w_lo, w_hi);
    if (!(c2 > 0.0)) throw CoercivityLost("c2 is not positive");
    return f_norm / (4.0 * c2 * c2);
}

double lipschitz_Sprime(double w_lo, double w_hi, double f_norm) {
    const double c2 = c2_coercivity(w_lo, w_hi);
    if (!(c2 > 0.0)) throw CoercivityLost("c2 is not positive");
    const double ls = lipschitz_S(w_lo, w_hi, f_norm);
    return (w_hi - w_lo) / (2.0 * c2) * (ls + f_norm / (kPi * c2 * c2));
}

double curvature_kappa(double w_lo, double w_hi, double f_norm) {
    const double c2 = c2_coercivity(w_lo, w_hi);
    if (!(c2 > 0.0)) throw CoercivityLost("c2 is not positive");
    return f_norm / (2.0 * kPi * c2 * c2 * c2);
}

ErrorConstants error_constants(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_h,
                               const Partition& coarse) {
    const double c1 = c1_coercivity(prob.w_lo);
    const double c2 = c2_coercivity(prob.w_lo, prob.w_hi);
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw CoercivityLost("coercivity constants are not positive");
    const double fn = norm_l2(prob.f);
    const double mw = max_abs_w(prob.w_lo, prob.w_hi);
    const double tvw = tv(w);

    ErrorConstants out;
    out.C32a = kPi * std::sqrt(std::abs(prob.w_hi - prob.w_lo)) * std::sqrt(tvw) * fn / (c1 * c2);
    out.C32b = kPiSq * mw * fn / (c1 * c2);

    // || f - (P_h u_h)(P_h w) ||_L1 exactly on the fem cells
    const CellFunction pu = project_avg(u_h, coarse);
    const CellFunction pw = project_avg(w, coarse);
    CellFunction prod(coarse, pu.values.cwiseProduct(pw.values));
    const double resid_l1 = l1_diff(prob.f, prod);

    out.C2 = (4.0 * kPiSq * mw * fn + tvw * resid_l1 + (c1 + mw / kPi) * tvw * fn) / (4.0 * c1 * c2);
    return out;
}

double lipschitz_L_u(const Envelope& env, const NodalFunction& u_d) {
    const Partition& fem = u_d.part;
    const int r = fem.n_cells() / env.coarse.n_cells();
    Eigen::VectorXd du(fem.n_cells() + 1);
    for (int j = 0; j <= fem.n_cells(); ++j) {
        // a node on a coarse-cell boundary takes the larger of both sides
        const int cl = std::min(std::max(0, (j - 1) / r), env.coarse.n_cells() - 1);
        const int cr = std::min(j / r, env.coarse.n_cells() - 1);
        double v = 0.0;
        for (const int c : {cl, cr}) {
            v = std::max(v, std::abs(env.u_hi.values[c] - u_d.values[j]));
            v = std::max(v, std::abs(u_d.values[j] - env.u_lo.values[c]));
        }
        du[j] = v;
    }
    return norm_l2(NodalFunction(fem, std::move(du)));
}

double d_f_l1(const PdeProblem& prob, const Envelope& env) {
    const Partition& fem = prob.fem_grid;
    const int r = fem.n_cells() / env.coarse.n_cells();
    double sum = 0.0;
    for (int i = 0; i < fem.n_cells(); ++i) {
        const int c = i / r;
        const double fv = prob.f.values[i];
        double v = 0.0;
        for (const double ub : {env.u_lo.values[c], env.u_hi.values[c]})
            for (const double wb : {env.w_lo.values[c], env.w_hi.values[c]})
                v = std::max(v, std::abs(fv - ub * wb));
        sum += fem.h() * v;
    }
    return sum;
}

double c_quad(const PdeProblem& prob, const CellFunction& w_hat, double j0, const Envelope& env,
              const NodalFunction& u_d, double alpha) {
    if (!(alpha > 0.0)) throw SpecMismatch("c_quad needs a positive tv weight");
    const double c1 = c1_coercivity(prob.w_lo);
    const double c2 = c2_coercivity(prob.w_lo, prob.w_hi);
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw CoercivityLost("coercivity constants are not positive");

    const NodalFunction u_hat = solve_state(prob, w_hat);
    const double value_hat = tracking_value(u_hat, u_d) + alpha * tv(w_hat);
    const double tv_bound = (value_hat - j0) / alpha;

    const double fn = norm_l2(prob.f);
    const double mw = max_abs_w(prob.w_lo, prob.w_hi);
    const double df = d_f_l1(prob, env);
    const double du = lipschitz_L_u(env, u_d);

    const double inner = 4.0 * kPiSq * mw * fn + tv_bound * df + (c1 + mw / kPi) * tv_bound * fn;
    return du * inner / (4.0 * c1 * c2);
}

double validated_lower_bound(double m_relax, double c_quad_value, double h) {
    return m_relax - c_quad_value * h * h;
}

Constants make_constants(const PdeProblem& prob, const CellFunction& w_hat, double j0, const Envelope& env,
                         const NodalFunction& u_d, double alpha) {
    Constants k;
    k.c1 = c1_coercivity(prob.w_lo);
    k.c2 = c2_coercivity(prob.w_lo, prob.w_hi);
    k.f_norm = norm_l2(prob.f);
    const EmbeddingBounds b1 = embedding_bounds(prob.w_lo, prob.w_hi, k.f_norm, CoercivityVariant::PlainC1);
    const EmbeddingBounds b2 = embedding_bounds(prob.w_lo, prob.w_hi, k.f_norm, CoercivityVariant::AveragedC2);
    k.h10_c1 = b1.h10;
    k.linf_c1 = b1.linf;
    k.h10_c2 = b2.h10;
    k.linf_c2 = b2.linf;
    k.L_S = lipschitz_S(prob.w_lo, prob.w_hi, k.f_norm);
    k.L_Sprime = lipschitz_Sprime(prob.w_lo, prob.w_hi, k.f_norm);
    k.kappa = curvature_kappa(prob.w_lo, prob.w_hi, k.f_norm);
    k.L_u = lipschitz_L_u(env, u_d);
    k.j0 = j0;
    k.c_quad = c_quad(prob, w_hat, j0, env, u_d, alpha);
    return k;
}

} // namespace mcc
