#pragma once

// The cyclic cover y^N = p(lambda) q(lambda)^{N-1} of the sphere with branch
// points lambda_1..lambda_{2m+1} and infinity; p collects the odd-indexed
// points (degree m+1), q the even-indexed ones (degree m). Genus (N-1)m.
//
// Sheet 1 is the branch
//   y1(l) = e^{i pi/N} q(l) prod_k ((l-l_{2k-1})/(l-l_{2k}))^{1/N} (l_{2m+1}-l)^{1/N}
// with principal powers. Its cuts are exactly the segments [l_{2k-1}, l_{2k}]
// and the horizontal ray from l_{2m+1} to +infinity; along arg l = pi/2 it
// behaves as l^m * l^{1/N} with the principal root, which anchors all branch
// conventions used downstream. Sheet s carries rho^{s-1} y1, rho = e^{2 pi i/N}.

#include <functional>
#include <utility>
#include <vector>

#include "zncurve/types.hpp"

namespace zn {

enum class Side { automatic, plus, minus };

struct ZnCurve {
    int N = 0;
    int m = 0;
    int g = 0;
    cplx rho;
    std::vector<cplx> lambda;  // lambda_1..lambda_{2m+1}, stored 0-based

    cplx lam(int k) const { return lambda[k - 1]; }  // 1-based accessor
    int genus() const { return g; }

    cplx p(cplx l) const;        // prod over odd-indexed branch points
    cplx q(cplx l) const;        // prod over even-indexed branch points
    cplx dlog_pq(cplx l) const;  // d/dl log(p/q)
    double scale() const;        // typical configuration length scale

    // Cuts: index c in 0..m-1 is the segment [lam(2c+1), lam(2c+2)];
    // index m is the horizontal ray from lam(2m+1) towards Re -> +inf.
    int num_cuts() const { return m + 1; }
    std::pair<cplx, cplx> cut_endpoints(int c) const;  // ray uses a long finite proxy
};

ZnCurve make_curve(int N, std::vector<cplx> lambdas, bool allow_unordered = false);

struct SheetedPoint {
    cplx lambda;
    int sheet = 1;  // 1..N
    cplx y{};       // cached root value, rho^{sheet-1} * y1(lambda)
};

// -1 if lambda is not on any cut (within tol_rel * scale), else the cut index.
int find_cut(const ZnCurve& C, cplx lambda, double tol_rel = 1e-11);
// 1-based branch-point index, or 0 if lambda is not a branch point.
int find_branch_point(const ZnCurve& C, cplx lambda, double tol_rel = 1e-11);

// Core branch evaluation from precomputed differences d[k] = lambda - lam(k+1).
// Callers integrating up to a branch point supply cancellation-free d entries.
// forced_cut (or -1) marks the cut lambda lies on, with the boundary value
// taken from the given side.
cplx y1_from_diffs(const ZnCurve& C, const std::vector<cplx>& d, int forced_cut, Side side);

// The root part w = y1 / q (phase and the N-th root factors only). Keeping q
// separate lets du be assembled as lambda^{j-1} / (q w^{s+1}) without the
// under/overflow of y^{s+1} near branch points.
cplx y1_root_from_diffs(const ZnCurve& C, const std::vector<cplx>& d, int forced_cut, Side side);

// Sheet-s root at a general point. Exact branch points return 0; points on a
// cut require an explicit side.
cplx y_value(const ZnCurve& C, cplx lambda, int sheet, Side side = Side::automatic);

SheetedPoint sheeted_point(const ZnCurve& C, cplx lambda, int sheet, Side side = Side::automatic);

// dlambda-coefficients of the g unnormalized differentials
//   du_{j+sm} = lambda^{j-1} q(lambda)^s / y^{s+1} dlambda
// at a point with known root value y (and q(lambda) = qval). Basis order:
// index i = (j-1) + s*m, j = 1..m, s = 0..N-2.
Vec du_all(const ZnCurve& C, cplx lambda, cplx y, cplx qval);

// Same values from the factored root part w = y/q; safe arbitrarily close to
// branch points.
Vec du_all_factored(const ZnCurve& C, cplx lambda, cplx root, cplx qval);

// Single-differential evaluator (dlambda trivialization at the given point).
std::function<cplx(const SheetedPoint&)> du_differential(const ZnCurve& C, int j, int s);

// Polygonal homology representatives. alpha_{j+km} is a rectangle enclosing
// cuts 1..j traversed on sheet k+1; beta_{j+rm} runs along gap j from
// lam(2j+1) to lam(2j) just above the axis on sheet r+1 and returns just below
// on sheet N, closing up through the two shared branch points.
struct CycleSegment {
    cplx a, b;
    int sheet;  // 1..N
};
struct CyclePath {
    std::vector<CycleSegment> segments;
    char kind;  // 'a' or 'b'
    int index;  // 1..g
};
CyclePath cycle_path(const ZnCurve& C, char kind, int index);

// Signed count of transversal same-sheet crossings of the two polygon cycles.
int intersection_number(const CyclePath& c1, const CyclePath& c2);

}  // namespace zn
