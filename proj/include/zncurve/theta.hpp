#pragma once

// Genus-g Riemann theta function with arbitrary (complex) characteristics,
// its z-derivatives, and the one-variable Jacobi specializations. Evaluation
// is a truncated lattice sum over an ellipsoid chosen from the Cholesky factor
// of Im Pi so that the discarded Gaussian tail stays below the target
// tolerance; the dominant real exponent is factored out of the sum.

#include <vector>

#include "zncurve/types.hpp"

namespace zn {

struct ThetaParams {
    Mat Pi;            // g x g Riemann matrix, symmetric, Im Pi > 0
    double tol = 1e-12;  // target absolute error of the factored sum
};

// theta[eps, delta](z; Pi)
//   = sum_n exp(pi*i <Pi(n+delta), n+delta> + 2 pi i <z+eps, n+delta>).
// Throws IllConditioned when the smallest eigenvalue of Im Pi is below 1e-8.
cplx theta(const Vec& z, const ThetaParams& params, const Characteristics& chars);
cplx theta(const Vec& z, const ThetaParams& params);  // zero characteristics

// Term-by-term differentiated sums at the same truncation.
Vec theta_gradient(const Vec& z, const ThetaParams& params, const Characteristics& chars);
Mat theta_hessian(const Vec& z, const ThetaParams& params, const Characteristics& chars);

// Value and all z-derivative tensors up to `order` (0..3) in one pass. The
// third-order tensor feeds the chain rule that converts heat-equation
// Pi-derivatives of theta gradients into parameter derivatives.
struct ThetaDerivatives {
    cplx value;
    Vec grad;                 // order >= 1
    Mat hess;                 // order >= 2
    std::vector<Mat> third;   // order >= 3, third[k](i, j) = d^3 theta / dz_k dz_i dz_j
};
ThetaDerivatives theta_derivatives(const Vec& z, const ThetaParams& params,
                                   const Characteristics& chars, int order);

// Jacobi theta functions in the Fourier normalization
//   theta3(z; tau) = sum_n exp(pi i tau n^2 + 2 pi i n z),
//   theta2(z; tau) = sum_n exp(pi i tau (n+1/2)^2 + 2 pi i (n+1/2) z).
// Throws IllConditioned for Im tau < 1e-8, BadArity for k outside {2, 3}.
cplx jacobi_theta(int k, cplx z, cplx tau);

}  // namespace zn
