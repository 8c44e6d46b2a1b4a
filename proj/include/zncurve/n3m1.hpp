#pragma once

// The three-sheet, four-singular-point (N = 3, m = 1) genus-2 specialization:
// hypergeometric periods with Pi = [[2T, T], [T, 2T]], decomposition of the
// genus-2 theta function into Jacobi theta products over the pair of
// 3-isogenous elliptic quotient curves, the modular parametrizations t(T) and
// p(T) with their Goursat/Halphen/Schwarzian consequences, the solution of
// the 3x3 boundary-value problem in Jacobi theta form, and the genus-2 tau
// function in closed elliptic form.

#include <vector>

#include "zncurve/rh.hpp"
#include "zncurve/types.hpp"

namespace zn {

struct EllipticData {
    cplx T;         // modulus, Im T > 0
    cplx t;         // cross-ratio (lambda2 - lambda1) / (lambda3 - lambda1)
    cplx p;         // theta-constant parameter 3 theta3^2(0;3T) / theta3^2(0;T)
    cplx k2_plus;   // (p+1)(3-p)^3 / (16 p^3)
    cplx k2_minus;  // (p+1)^3 (3-p) / (16 p)
    cplx A1, B1;    // alpha_1 / beta_1 periods of the first differential
    Mat Pi;         // [[2T, T], [T, 2T]]
};

// Periods of the curve y^3 = (l-l1)(l-l3)(l-l2)^2 by Gauss hypergeometric
// series: A1 = (2 pi/sqrt 3)(1-rho^2)(l3-l1)^{-1/3} F(1/3,2/3;1;t),
// B1 = 2 pi i (l3-l1)^{-1/3} F(1/3,2/3;1;1-t), T = (i/sqrt 3) F(1-t)/F(t).
EllipticData periods_n3m1(cplx lambda1, cplx lambda2, cplx lambda3);

// Inverse of T(t): t = 27 theta3^4(0;3T) (theta3^4(0;3T) - theta3^4(0;T))^2
//                      / (3 theta3^4(0;3T) + theta3^4(0;T))^3.
cplx t_of_T(cplx T);

struct Moduli {
    cplx p, k2_plus, k2_minus;
    cplx t;  // algebraic form p^2 (p^2-9)^2 / (p^2+3)^3
};
Moduli p_and_moduli(cplx T);

// Genus-2 theta with characteristics on Pi(T) as a sum of two Jacobi theta
// products with moduli 6T and 2T:
//   e^{pi i <d,Pi d> + 2 pi i <z+e,d>} [th3(e1;6T) th3(e2;2T) + th2(e1;6T) th2(e2;2T)],
//   e1 = z1+z2+e_1+e_2+3T(d_1+d_2), e2 = z1-z2+e_1-e_2+T(d_1-d_2).
cplx decompose_theta(const Vec& z, const Characteristics& chars, cplx T);

// The 3x3 solution in Jacobi theta form: the theta ratio of the generic
// solver rewritten through the differentials dv_+ = dv_1 - 2 dv_2 (modulus
// 6T) and dv_- = dv_1 (modulus 2T) of the elliptic quotients. Agrees with
// rh_Y entrywise.
Mat Y_jacobi(const RHSolution& sol, cplx lambda, Side side = Side::automatic);

struct HalphenReport {
    cplx omega1, omega2, omega3;  // -(1/2) d/dT log(tdot / {t(t-1), t-1, t})
    cplx R;                       // quadratic form with alpha = 1/3, beta = gamma = 0
    double halphen_residual;      // general system, R included
    double classical_residual;    // R dropped: degenerate control, stays large
    double schwarzian_residual;   // {t,T} + (tdot^2/2) V(t)
};

// Numerical-differentiation verification (Cauchy-integral derivatives of
// t_of_T on a circle of radius h) that t(T) solves the general Halphen
// system with alpha = 1/3, beta = gamma = 0 and the Schwarzian equation with
// the matching potential.
HalphenReport halphen_check(cplx T, double h = 1e-2);

// Residual of the hypergeometric reduction
//   (2/sqrt 3) F(1/3,2/3;1;t) = (1/2) (p^2+3) p^{-3/2} F(1/2,1/2;1;k2_plus)
// on the branch of t = p^2 (p^2-9)^2 / (p^2+3)^3 continuous with p(T).
double goursat_check(cplx t);

// Genus-2 tau function in Jacobi theta form: the configuration prefactor
// ((l1-l3)/((l1-l2)(l2-l3)))^{2/9} times the decomposed theta-constant ratio.
cplx tau_n3m1(const std::vector<cplx>& lambdas, const std::vector<cplx>& c,
              const std::vector<cplx>& d);

}  // namespace zn
