#pragma once

// Prime form, Szego kernels (theta-based and algebraic closed forms) and the
// Bergmann kernel. All values are coefficient functions in the fixed
// trivialization by sqrt(d lambda) (half-forms) resp. d lambda d mu
// (2-forms); the local coordinate is lambda itself away from branch points.
//
// The half-differential h(P) entering the prime form is defined only up to a
// per-point sign by its square h^2 = sum_j d_j theta[gamma](0) dv_j(P). The
// sign is fixed coherently by anchoring against the zero-characteristics
// Szego kernel, whose algebraic closed form is sign-free: h(P) is the unique
// value making S[0](P, anchor) equal to the closed form.

#include <vector>

#include "zncurve/curve.hpp"
#include "zncurve/periods.hpp"
#include "zncurve/theta.hpp"
#include "zncurve/types.hpp"

namespace zn {

struct KernelContext {
    const ZnCurve* C = nullptr;
    const AbelContext* abel = nullptr;
    ThetaParams params;
    Characteristics gamma;  // odd non-singular half-integer characteristic
    Vec grad0;              // gradient of theta[gamma] at 0
    std::vector<SheetedPoint> anchors;  // sign-fixing anchors (first = primary)
    std::vector<cplx> h_anchor;         // h at the anchors (principal root)
};

// Scan all 2^{2g} half-integer characteristics in a fixed order and return
// the first odd one whose theta gradient at 0 exceeds 1e-6 in norm.
// Throws NoneFound when every odd characteristic is singular.
Characteristics find_odd_char(const ThetaParams& params);

KernelContext make_kernel_context(const ZnCurve& C, const AbelContext& abel,
                                  double theta_tol = 1e-12);

// Optionally build with a caller-chosen odd characteristic (for the
// gamma-independence checks).
KernelContext make_kernel_context(const ZnCurve& C, const AbelContext& abel,
                                  const Characteristics& gamma, double theta_tol = 1e-12);

// Normalized holomorphic differentials at a sheeted point, as coefficients
// with respect to d lambda.
Vec dv_point(const KernelContext& ctx, const SheetedPoint& P);

// Sign-fixed half-differential h(P) (coefficient w.r.t. sqrt(d lambda)).
// Throws DegenerateH when h vanishes at the sample point.
cplx h_half(const KernelContext& ctx, const SheetedPoint& P);

// Schottky-Klein prime form, coefficient w.r.t. 1/sqrt(d lambda_P d lambda_Q).
cplx prime_form(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q);

// Theta-based Szego kernel for non-singular characteristics.
// Throws SingularCharacteristics when theta[chars](0) vanishes.
cplx szego(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q,
           const Characteristics& chars);

// Algebraic closed form of the zero-characteristics Szego kernel:
//   (1/N) (lambda_P - lambda_Q)^{-1} sum_s [(q/p)(P) (p/q)(Q)]^{(N-1-2s)/(2N)}
// with the root branch tied to the branch of y (asymptotically principal
// along arg lambda = pi/2). Throws OnCut for arguments on a branch cut.
cplx szego_zero(const ZnCurve& C, const SheetedPoint& P, const SheetedPoint& Q);

// Closed form of the Szego kernel attached to the branch-point divisor
// (N-1) sum_{i in I_m} P_i: same structure with the ratio of psi factors
// prod_{i in I} (lambda - lambda_i) / prod_{j notin I} (lambda - lambda_j).
// I_m holds m distinct indices in 1..2m+1.
//
// The closed form is a flat section (and equals the theta-based kernel at
// szego_Dm_characteristics) exactly when the sign pattern of the exponents
// +-1/(2N) has zero pairwise winding around every pair of adjacent branch
// points mod N: for N = 2 that is every index set, for N >= 3 only the
// interlacing set I = {2, 4, ..., 2m}. For other sets the expression is
// well defined but multivalued on the curve and does not reproduce any
// Szego kernel; callers should treat it as valid only on the sets above.
cplx szego_Dm(const ZnCurve& C, const SheetedPoint& P, const SheetedPoint& Q,
              const std::vector<int>& I_m);

// Characteristics of the theta-based kernel matching szego_Dm.
Characteristics szego_Dm_characteristics(const AbelContext& abel, const std::vector<int>& I_m);

// Bergmann kernel d_lambda d_mu log E(P,Q) by Richardson-extrapolated central
// differences; coefficient w.r.t. d lambda_P d lambda_Q.
// Throws StepUnderflow when P and Q are too close for the stencil.
cplx bergmann(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q);

}  // namespace zn
