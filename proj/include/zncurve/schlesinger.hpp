#pragma once

// Isomonodromic data derived from the solved boundary-value problem: the
// residue matrices A_k of the Fuchsian system dY/dlambda = sum A_k/(l-l_k) Y,
// the Schlesinger equations they satisfy (with the lambda0-normalization
// terms), the tau function in closed form, and the Thomae-type formula for
// the theta constant.

#include <string>
#include <vector>

#include "zncurve/curve.hpp"
#include "zncurve/periods.hpp"
#include "zncurve/rh.hpp"
#include "zncurve/theta.hpp"
#include "zncurve/types.hpp"

namespace zn {

struct SchlesingerData {
    std::vector<Mat> A;  // A[k] for k = 1..2m+1, A[0] unused
    Mat A_inf;           // -sum_k A_k
    cplx lambda0;
    std::string source;  // "closed-form" | "residue-oracle"
};

// A_k = Res_{lambda_k} Y'(lambda) Y(lambda)^{-1} by trapezoid quadrature on
// a circle of radius min_j |lambda_k - lambda_j| / 8, with Y' by central
// differences (the integrand is single-valued: right jump factors cancel).
SchlesingerData a_matrices_residue(const RHSolution& sol);

// Closed form of the A_k: diagonal entries from the directional derivative
// of the theta-constant log-gradient paired with the normalized
// differentials at the base point, off-diagonal entries from the
// lambda_k-derivative of d/dlambda0 log(q/p) times the theta ratio between
// base-point sheets. Theta objects are differentiated analytically through
// the period matrix (heat equation + Rauch formula); the curve-geometry
// arguments (Abel integrals and differential coefficients at lambda0) use
// central differences over re-assembled period data.
SchlesingerData a_matrices_closed(const RHSolution& sol);

// Max defect of the Schlesinger system in the lambda0-normalized form
//   dA_k/dlambda_j = [A_k,A_j]/(lambda_k-lambda_j) - [A_k,A_j]/(lambda0-lambda_j), j != k,
//   dA_k/dlambda_k = -sum_{j != k} [A_k,A_j]/(lambda_k-lambda_j)
// (the lambda0 terms cancel on the diagonal since [A_k, A_k] = 0), with
// dA_k/dlambda_j by Richardson-extrapolated central differences over
// re-solved problems at perturbed configurations. include_base_terms=false
// drops the -[A_k,A_j]/(lambda0-lambda_j) terms (negative control).
double schlesinger_residual(const ZnCurve& C, const MonodromySet& mono, cplx lambda0,
                            double h = 1e-4, bool include_base_terms = true);

struct TauReport {
    cplx value;           // theta_ratio * product_factor
    cplx theta_ratio;     // theta[chars](0) / theta(0)
    cplx product_factor;  // branch-point difference products
    Vec log_derivatives;  // d log tau / d lambda_k, k = 1..2m+1 (0-based k-1)
};

// Closed-form tau function: theta ratio times
//   prod_{odd pairs} (diff)^{(N^2-1)/(6N)} prod_{even pairs} (diff)^{(N^2-1)/(6N)}
//   / prod_{all pairs} (diff)^{(N^2-1)/(12N)},
// with log-derivatives assembled analytically (heat + Rauch for the theta
// constants, rational derivatives for the products).
TauReport tau(const ZnCurve& C, const AbelContext& abel, const MonodromySet& mono);

// Independent oracle: d log tau / d lambda_k
//   = (1/2) Res_{lambda_k} Tr (Y' Y^{-1})^2
// by the same contour quadrature as a_matrices_residue.
cplx tau_log_derivative_residue(const RHSolution& sol, int k);

// Relative error of theta(0;Pi)^8 against the closed form
//   prod_s det(A_s)^4 / (2 pi i)^{4(N-1)m}
//   * prod_{even pairs} diff^{2(N-1)} * prod_{odd pairs} diff^{2(N-1)},
// where A_s are the m x m alpha-period blocks of the unnormalized
// differentials.
double thomae_check(const ZnCurve& C, const PeriodData& P);

// |theta[chars](0)| / |theta(0)| for each characteristic: the theta factor
// of tau, vanishing exactly on the Malgrange divisor.
std::vector<double> malgrange_probe(const AbelContext& abel,
                                    const std::vector<Characteristics>& chars);

}  // namespace zn
