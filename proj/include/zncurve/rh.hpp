#pragma once

// Boundary-value problem on the real contour through the branch points:
// piecewise-analytic N x N matrices Y with Y_- = Y_+ G_k on segment k
// (upper half plane = plus side, segments oriented left to right),
// Y(lambda0) = 1 and quasi-permutation monodromy. The jump matrices are
// built from 2(N-1)m nonzero constants; the solution is assembled from the
// scalar-diagonalizable canonical part X and theta-function ratios whose
// characteristics are the (2 pi i)-logarithms of the constants.

#include <vector>

#include "zncurve/curve.hpp"
#include "zncurve/periods.hpp"
#include "zncurve/theta.hpp"
#include "zncurve/types.hpp"

namespace zn {

struct MonodromySet {
    int N = 0, m = 0;
    std::vector<cplx> c, d;  // (N-1)m constants each, index (k-1) + s*m
    std::vector<Mat> G;      // G[0..2m+2], G[0] = G[2m+2] = identity
    std::vector<Mat> M;      // M[k] = G_k G_{k-1}^{-1} for k = 1..2m+2; M[0] unused
    Mat P;                   // cyclic quasi-permutation, corner (-1)^{N-1}
    RVec sigma;              // exponents (2j-1-N)/(2N), j = 1..N
    Mat U, Uinv;             // P = U exp(2 pi i diag(sigma)) U^{-1}, first row of U all ones
};

// Jump matrices G_{2k-1} (cuts, from the c constants), G_{2k} (gaps, diagonal
// from the d constants), G_{2m+1} = P on the ray; monodromies M_k and the
// monodromy at infinity M_{2m+2} = P^{-1}.
MonodromySet build_monodromy(int N, int m, const std::vector<cplx>& c,
                             const std::vector<cplx>& d);

// True when c_{k+sm} = xi_k^{s+1}, d_{k+sm} = zeta_k for N-th roots of unity
// xi_k, zeta_k: the monodromy matrices are then roots of unity times powers
// of P and the representation is reducible.
bool is_reducible(const MonodromySet& mono, double tol = 1e-12);

// Theta characteristics from principal logarithms of the constants:
//   eps_{k+sm} = log(c_{k+sm}/c_{k+1+sm}) / (2 pi i) for k = 1..m-1,
//   eps_{sm}   = log(c_{sm}) / (2 pi i)             for s = 1..N-1,
//   delta_k    = log(d_k) / (2 pi i).
Characteristics chars_from_constants(const MonodromySet& mono);

// Index of the contour segment containing the real abscissa x:
// 0 = (-inf, lambda_1), 2k-1 = cut k, 2k = gap k, 2m+1 = the ray.
// Branch points themselves return the index of the cut they bound.
int segment_index(const ZnCurve& C, double x);

// Canonical solution with all constants 1: X = U W^{sigma} U^{-1} with
// W = (p/q)(lambda) (q/p)(lambda0) and the scalar root branch cut along the
// branch cuts (principal along arg lambda = pi/2), so X_- = X_+ P on every
// cut and on the ray, X(lambda0) = 1 and det X = 1. Entrywise
//   X_rs = (1/N) sum_{k=0}^{N-1} e^{i pi (s-r)(N-1-2k)/N} u^{N-1-2k},
// u = h(lambda)/h(lambda0), h the sheet-1 branch of (p/q)^{1/(2N)}.
// Real lambda on a cut or the ray needs an explicit side.
Mat canonical_X(const ZnCurve& C, cplx lambda0, cplx lambda, Side side = Side::automatic);

struct RHSolution {
    const ZnCurve* C = nullptr;
    const AbelContext* abel = nullptr;
    MonodromySet mono;
    Characteristics chars;
    cplx lambda0;
    std::vector<Vec> v0;  // Abel images of lambda0 on sheets 1..N
    ThetaParams params;
    cplx theta0;     // theta(0)
    cplx theta_ch0;  // theta[chars](0)
};

// Assembles the solution data for the jump matrices of `mono`. The base
// point must lie off the contour (strictly complex, or real left of
// lambda_1). Throws SolvabilityViolation when |theta[chars](0)| falls below
// 1e-10 |theta(0)| (the Malgrange divisor).
RHSolution solve_Y(const ZnCurve& C, const AbelContext& abel, const MonodromySet& mono,
                   cplx lambda0);

// Evaluate the solution; side resolves boundary values for real lambda on
// the contour (OnCut when ambiguous). Throws ThetaDenominatorZero at points
// of the theta divisor (callers resample; Y itself stays finite there only
// as an analytic limit).
Mat rh_Y(const RHSolution& sol, cplx lambda, Side side = Side::automatic);

// Monodromy of the counterclockwise loop around lambda_k (k = 1..2m+1), or
// around infinity for k = 2m+2: M with Y(gamma(lambda)) = Y(lambda) M,
// extracted from one-sided boundary values at the two axis crossings of the
// loop. Resamples crossings that fall on the theta divisor.
Mat monodromy_of_solution(const RHSolution& sol, int k);

struct ShiftReport {
    std::vector<cplx> multiplier;  // per k = 1..2m+2 (index k), [0] unused
    std::vector<int> j;            // multiplier = e^{2 pi i j_k / N}
    double max_multiplier_residual = 0.0;    // | Mtilde_k - multiplier * M_k |
    double max_single_valued_residual = 0.0; // (Ytilde/Y)^N around each loop
    int j_sum_mod_N = 0;
};

// Solution with characteristics shifted by divisor characteristics in
// (Z/N)^g: monodromies change by N-th roots of unity with total product 1,
// and the entrywise ratio (Ytilde/Y)^N is single-valued.
ShiftReport shift_check(const RHSolution& sol, const Characteristics& shift);

}  // namespace zn
