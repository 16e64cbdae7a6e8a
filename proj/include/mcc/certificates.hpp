#pragma once

#include "mcc/relaxation.hpp"

namespace mcc {

// Closed-form constants of the 1D elliptic setting; everything is evaluated
// from (w_lo, w_hi, ||f||) and exact grid quantities.
double c1_coercivity(double w_lo);                 // 1 + w_lo / pi^2
double c2_coercivity(double w_lo, double w_hi);    // 1 - max(|w_lo|, |w_hi|) / pi^2

enum class CoercivityVariant { PlainC1, AveragedC2 };

struct EmbeddingBounds {
    double h10;  // ||grad u|| <= ||f|| / c
    double linf; // ||u||_inf  <= ||f|| / (2 c)
};
EmbeddingBounds embedding_bounds(double w_lo, double w_hi, double f_norm, CoercivityVariant variant);

double lipschitz_S(double w_lo, double w_hi, double f_norm);       // ||f|| / (4 c2^2)
double lipschitz_Sprime(double w_lo, double w_hi, double f_norm);
double curvature_kappa(double w_lo, double w_hi, double f_norm);   // ||f|| / (2 pi c2^3)

struct ErrorConstants {
    double C32a; // h^{3/2} coefficient
    double C32b; // companion h^2 coefficient
    double C2;   // full quadratic-rate constant
};

// Evaluates the a-priori constants for a fixed control w and the computed
// averaged-state solution u_h on the cells of `coarse`.
ErrorConstants error_constants(const PdeProblem& prob, const CellFunction& w, const NodalFunction& u_h,
                               const Partition& coarse);

// Tracking-objective Lipschitz overestimate ||d_u|| with
// d_u(x) = max(|u_hi - u_d|, |u_d - u_lo|), evaluated nodally on the fem grid.
double lipschitz_L_u(const Envelope& env, const NodalFunction& u_d);

// Exact L1 norm of the four-corner overestimate of |f - (P u)(P w)|.
double d_f_l1(const PdeProblem& prob, const Envelope& env);

// Quadratic-rate certificate constant: the validated lower bound on the true
// problem is m_relax - c_quad * h^2. w_hat is any feasible control, j0 a
// valid lower bound on the optimal tracking term (0 always works).
double c_quad(const PdeProblem& prob, const CellFunction& w_hat, double j0, const Envelope& env,
              const NodalFunction& u_d, double alpha);

double validated_lower_bound(double m_relax, double c_quad_value, double h);

// Everything above bundled for reports.
struct Constants {
    double c1 = 0, c2 = 0;
    double f_norm = 0;
    double linf_c1 = 0, linf_c2 = 0, h10_c1 = 0, h10_c2 = 0;
    double L_S = 0, L_Sprime = 0, kappa = 0;
    double L_u = 0;
    double j0 = 0;
    double c_quad = 0;
};

Constants make_constants(const PdeProblem& prob, const CellFunction& w_hat, double j0, const Envelope& env,
                         const NodalFunction& u_d, double alpha);

} // namespace mcc
