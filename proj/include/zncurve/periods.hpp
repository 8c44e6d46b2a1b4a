#pragma once

// Periods of the unnormalized differentials du_{j+sm} over the cycle basis,
// the normalized period matrix, Abel integrals with the point at infinity as
// base point, and branch-aware continuation of du-integrals along paths that
// cross cuts.
//
// Every alpha/beta period reduces to segment integrals along the cuts and the
// gaps between them:
//   C_j = integral over cut j (from lam(2j-1) to lam(2j), plus-side, sheet 1)
//   G_j = integral over gap j (from lam(2j+1) back to lam(2j), sheet 1)
// with the rotation factors of the cyclic automorphism supplying the sheet
// dependence. alpha_{j+km} encircles cuts 1..j on sheet k+1, so its column is
// cumulative in the C_l.

#include <string>
#include <utility>
#include <vector>

#include "zncurve/curve.hpp"
#include "zncurve/quadrature.hpp"
#include "zncurve/roots.hpp"
#include "zncurve/types.hpp"

namespace zn {

struct PeriodOptions {
    QuadratureSpec quad;  // endpoint exponents are filled in per segment
};

struct PeriodData {
    int N = 0, m = 0, g = 0;
    Mat C;  // g x m, column j-1 = cut-segment integrals of all du
    Mat G;  // g x m, column j-1 = gap-segment integrals of all du
    Mat A;  // A(i, c) = oint_{alpha_{c+1}} du_{i+1}
    Mat B;  // B(i, c) = oint_{beta_{c+1}} du_{i+1}
    Mat Ainv;  // normalization: dv = Ainv du
    Mat Pi;    // Ainv * B, symmetric with positive definite imaginary part
    // structural decomposition: A = Diag(A_blocks) R_A, B = Diag(B_blocks) R_B,
    // Pi = R_A^{-1} Diag(A_s^{-1} B_s) R_B
    std::vector<Mat> A_blocks, B_blocks;  // N-1 matrices of size m x m
    Mat R_A, R_B;
};

// Integral of all g du over the straight segment a -> b on the branch
// rho^{offset} y1. Branch-point endpoints are detected and handled with
// cancellation-free differences and matching endpoint exponents. forced_cut
// (with side) applies when the segment lies on a cut.
Vec integrate_du(const ZnCurve& C, cplx a, cplx b, int offset, int forced_cut, Side side,
                 const QuadratureSpec& spec);

Mat segment_integrals_C(const ZnCurve& C, const QuadratureSpec& spec);
Mat segment_integrals_G(const ZnCurve& C, const QuadratureSpec& spec);

// A and B from the segment tables (no new quadrature).
void assemble_periods(const ZnCurve& C, PeriodData& P);

PeriodData period_matrix(const ZnCurve& C, const PeriodOptions& opt = {});

// Direct quadrature of du over a polygonal cycle representative with fixed
// per-segment sheet; independent oracle for the assembled periods.
Vec cycle_period_direct(const ZnCurve& C, const CyclePath& cp, const QuadratureSpec& spec);

// Continuation of the du-integral along a polyline that may cross cuts. The
// branch starts as rho^{offset0} y1 and the returned offset reflects every
// crossing found along the way.
struct ContinuedIntegral {
    Vec integral;
    int offset = 0;
};
ContinuedIntegral integrate_du_along(const ZnCurve& C, const std::vector<cplx>& verts,
                                     int offset0, const QuadratureSpec& spec);

// Abel integrals from the (single) point at infinity. Standard paths descend
// from infinity along a fixed vertical ray to a high anchor, run horizontally
// at the anchor height, and drop vertically onto the target; targets in the
// lower half plane are reached around the left of all branch points, so no
// path crosses a cut.
struct AbelContext {
    const ZnCurve* C = nullptr;
    PeriodData P;
    QuadratureSpec quad;
    double H = 0.0;       // anchor height
    cplx anchor_top;      // x_c + iH
    cplx anchor_bottom;   // x_L - iH, reached around the left
    cplx x_left;          // detour abscissa left of all branch points
    Vec tail_top;         // int_inf^{anchor_top} du (vertical ray)
    Vec tail_bottom;      // int_inf^{anchor_bottom} du (via the left detour)
};

AbelContext make_abel(const ZnCurve& C, const PeriodOptions& opt = {});

// du-integral from infinity to lambda. Targets strictly inside a half plane
// are reached through that half plane (from_above is ignored); for targets on
// the real axis the flag selects the boundary value.
Vec abel_du(const AbelContext& ctx, cplx lambda, bool from_above = true);

// Normalized Abel map of the point (lambda, sheet): Ainv * D_sheet * abel_du,
// where D_sheet carries the rotation of du under the deck transformation.
Vec abel_v(const AbelContext& ctx, cplx lambda, int sheet, bool from_above = true);

// Diagonal rotation factors of du on sheet s: block s' scales by
// rho^{-(s-1)(s'+1)}.
Vec sheet_rotation(const ZnCurve& C, int sheet);

// General Abel integral of the normalized differentials between two sheeted
// points along the given polyline, with branch continuation across cuts.
Vec abel_map(const ZnCurve& C, const PeriodData& P, const SheetedPoint& from,
             const SheetedPoint& to, const PathSpec& path, const QuadratureSpec& spec = {});

// Real lattice coordinates of a vector: U = a + Pi b with real a, b.
std::pair<RVec, RVec> lattice_coordinates(const Mat& Pi, const Vec& U);
// Distance of U from the lattice Z^g + Pi Z^g (in lattice coordinates).
double lattice_distance(const Mat& Pi, const Vec& U);

// Riemann constants with base point infinity:
// K = (N-1) sum_k int_inf^{P_{2k}} dv.
Vec riemann_constants(const AbelContext& ctx);

// Rational characteristic table of U_k = int_inf^{lam(k)} dv, k = 1..2m+1,
// verified against Abel quadrature modulo the lattice.
std::vector<Characteristics> branch_characteristics(const AbelContext& ctx);

struct BranchDivisor {
    // multiplicity per branch-point index 1..2m+1 (infinity carries the
    // complementary degree and contributes nothing to the Abel image)
    std::vector<std::pair<int, int>> weights;
};

// Characteristics of the Abel image of D (minus the Riemann divisor when
// subtract_delta), assembled from the rational tables, entries reduced
// to [-1, 1).
Characteristics divisor_characteristics(const AbelContext& ctx, const BranchDivisor& D,
                                        bool subtract_delta = true);

// dPi/dlambda_i (i = 1..2m+1) from the residue of the quadratic differential
// dv_j dv_k / dlambda at the branch point, evaluated on a small circle in the
// local coordinate z = (lambda - lambda_i)^{1/N}.
Mat rauch_derivative(const ZnCurve& C, const PeriodData& P, int i);

}  // namespace zn
