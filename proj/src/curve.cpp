#include "zncurve/curve.hpp"

#include <algorithm>
#include <cmath>

namespace zn {

cplx ZnCurve::p(cplx l) const {
    cplx v = 1.0;
    for (int k = 1; k <= 2 * m + 1; k += 2) v *= (l - lam(k));
    return v;
}

cplx ZnCurve::q(cplx l) const {
    cplx v = 1.0;
    for (int k = 2; k <= 2 * m; k += 2) v *= (l - lam(k));
    return v;
}

cplx ZnCurve::dlog_pq(cplx l) const {
    cplx v = 0.0;
    for (int k = 1; k <= 2 * m + 1; ++k) {
        cplx term = 1.0 / (l - lam(k));
        v += (k % 2 == 1) ? term : -term;
    }
    return v;
}

double ZnCurve::scale() const {
    double s = 0.0;
    for (const cplx& l : lambda) s = std::max(s, std::abs(l));
    return std::max(s, 1.0);
}

std::pair<cplx, cplx> ZnCurve::cut_endpoints(int c) const {
    if (c < 0 || c > m) throw DomainError("cut_endpoints: cut index out of range");
    if (c < m) return {lam(2 * c + 1), lam(2 * c + 2)};
    // Horizontal ray towards +infinity; a long finite proxy suffices for the
    // geometric queries this is used in.
    cplx a = lam(2 * m + 1);
    return {a, a + cplx(1e8 * scale(), 0.0)};
}

ZnCurve make_curve(int N, std::vector<cplx> lambdas, bool allow_unordered) {
    if (N < 2) throw BadArity("make_curve: need N >= 2");
    if (lambdas.size() % 2 != 1 || lambdas.size() < 3)
        throw BadArity("make_curve: need an odd number (>= 3) of branch points");
    ZnCurve C;
    C.N = N;
    C.m = ((int)lambdas.size() - 1) / 2;
    C.g = (N - 1) * C.m;
    C.rho = std::exp(cplx(0.0, 2.0 * PI / N));
    C.lambda = std::move(lambdas);
    double sc = C.scale();
    for (size_t i = 0; i < C.lambda.size(); ++i)
        for (size_t j = i + 1; j < C.lambda.size(); ++j)
            if (std::abs(C.lambda[i] - C.lambda[j]) < 1e-12 * sc)
                throw DuplicatePoints("make_curve: coincident branch points");
    if (!allow_unordered) {
        for (size_t i = 0; i + 1 < C.lambda.size(); ++i)
            if (!(C.lambda[i].real() < C.lambda[i + 1].real()))
                throw DomainError(
                    "make_curve: branch points must have strictly increasing real parts "
                    "(pass allow_unordered to keep a custom order)");
    }
    return C;
}

int find_branch_point(const ZnCurve& C, cplx lambda, double tol_rel) {
    double tol = tol_rel * C.scale();
    for (int k = 1; k <= 2 * C.m + 1; ++k)
        if (std::abs(lambda - C.lam(k)) <= tol) return k;
    return 0;
}

namespace {

// Distance from z to segment [a, b].
double seg_dist(cplx z, cplx a, cplx b) {
    cplx d = b - a;
    double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(z - a);
    double t = std::clamp(((z - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

}  // namespace

int find_cut(const ZnCurve& C, cplx lambda, double tol_rel) {
    double tol = tol_rel * C.scale();
    for (int c = 0; c < C.m; ++c) {
        auto [a, b] = C.cut_endpoints(c);
        if (seg_dist(lambda, a, b) <= tol) return c;
    }
    // the ray: horizontal from lam(2m+1) to +inf
    cplx a = C.lam(2 * C.m + 1);
    if (std::abs(lambda.imag() - a.imag()) <= tol && lambda.real() >= a.real() - tol)
        return C.m;
    return -1;
}

cplx y1_root_from_diffs(const ZnCurve& C, const std::vector<cplx>& d, int forced_cut, Side side) {
    if ((int)d.size() != 2 * C.m + 1)
        throw BadArity("y1_root_from_diffs: need one difference per branch point");
    const double inv_N = 1.0 / C.N;
    cplx val = std::exp(cplx(0.0, PI * inv_N));
    // boundary values on a cut: the ratio (or ray) factor is negative real
    // there, and the limit from the plus side carries arg -> -pi (the minus
    // side is +pi); this holds for every cut orientation used here.
    auto cut_pow = [&](cplx base, double expo) {
        if (side == Side::automatic)
            throw CutAmbiguity("y1_from_diffs: point on a cut needs an explicit side");
        double a = (side == Side::plus) ? -PI : PI;
        return std::exp(expo * (std::log(std::abs(base)) + cplx(0.0, a)));
    };
    for (int c = 0; c < C.m; ++c) {
        cplx ratio = d[2 * c] / d[2 * c + 1];
        val *= (forced_cut == c) ? cut_pow(ratio, inv_N) : std::pow(ratio, inv_N);
    }
    cplx last = -d[2 * C.m];  // lam(2m+1) - lambda
    val *= (forced_cut == C.m) ? cut_pow(last, inv_N) : std::pow(last, inv_N);
    return val;
}

cplx y1_from_diffs(const ZnCurve& C, const std::vector<cplx>& d, int forced_cut, Side side) {
    cplx val = y1_root_from_diffs(C, d, forced_cut, side);
    for (int k = 2; k <= 2 * C.m; k += 2) val *= d[k - 1];  // q(lambda)
    return val;
}

cplx y_value(const ZnCurve& C, cplx lambda, int sheet, Side side) {
    if (sheet < 1 || sheet > C.N) throw DomainError("y_value: sheet out of range");
    if (find_branch_point(C, lambda) != 0) return cplx(0.0);
    std::vector<cplx> d(2 * C.m + 1);
    for (int k = 1; k <= 2 * C.m + 1; ++k) d[k - 1] = lambda - C.lam(k);
    int cut = find_cut(C, lambda);
    if (cut >= 0 && side == Side::automatic)
        throw CutAmbiguity("y_value: point lies on a cut; specify a side");
    cplx y1 = y1_from_diffs(C, d, cut, side);
    return std::pow(C.rho, sheet - 1) * y1;
}

SheetedPoint sheeted_point(const ZnCurve& C, cplx lambda, int sheet, Side side) {
    SheetedPoint P;
    P.lambda = lambda;
    P.sheet = sheet;
    P.y = y_value(C, lambda, sheet, side);
    return P;
}

Vec du_all_factored(const ZnCurve& C, cplx lambda, cplx root, cplx qval) {
    Vec v(C.g);
    const cplx inv_q = 1.0 / qval;
    const cplx inv_w = 1.0 / root;
    cplx ws = inv_w;  // 1/w^{s+1}
    for (int s = 0; s <= C.N - 2; ++s) {
        cplx qs = inv_q * ws;  // q^s / y^{s+1}
        cplx lj = 1.0;         // lambda^{j-1}
        for (int j = 1; j <= C.m; ++j) {
            v((j - 1) + s * C.m) = lj * qs;
            lj *= lambda;
        }
        ws *= inv_w;
    }
    return v;
}

Vec du_all(const ZnCurve& C, cplx lambda, cplx y, cplx qval) {
    return du_all_factored(C, lambda, y / qval, qval);
}

std::function<cplx(const SheetedPoint&)> du_differential(const ZnCurve& C, int j, int s) {
    if (j < 1 || j > C.m || s < 0 || s > C.N - 2)
        throw DomainError("du_differential: index out of range");
    return [&C, j, s](const SheetedPoint& P) {
        return std::pow(P.lambda, j - 1) * std::pow(C.q(P.lambda), s) /
               std::pow(P.y, s + 1);
    };
}

CyclePath cycle_path(const ZnCurve& C, char kind, int index) {
    if (index < 1 || index > C.g) throw DomainError("cycle_path: index out of range");
    const int j = (index - 1) % C.m + 1;      // cut / gap number, 1..m
    const int blk = (index - 1) / C.m;        // sheet block, 0..N-2
    CyclePath cp;
    cp.kind = kind;
    cp.index = index;
    double sc = C.scale();
    // smallest spacing between consecutive branch points sets clearances
    double dmin = 1e300;
    for (int k = 1; k <= 2 * C.m; ++k)
        dmin = std::min(dmin, std::abs(C.lam(k + 1) - C.lam(k)));
    if (kind == 'a') {
        // counter-clockwise rectangle enclosing cuts 1..j on sheet blk+1
        double h = 0.35 * dmin;
        double xlo = C.lam(1).real(), xhi = C.lam(2 * j).real();
        double ylo = C.lam(1).imag(), yhi = ylo;
        for (int k = 2; k <= 2 * j; ++k) {
            xlo = std::min(xlo, C.lam(k).real());
            xhi = std::max(xhi, C.lam(k).real());
            ylo = std::min(ylo, C.lam(k).imag());
            yhi = std::max(yhi, C.lam(k).imag());
        }
        (void)sc;
        cplx c1(xlo - h, ylo - h), c2(xhi + h, ylo - h), c3(xhi + h, yhi + h), c4(xlo - h, yhi + h);
        int sheet = blk + 1;
        cp.segments = {{c1, c2, sheet}, {c2, c3, sheet}, {c3, c4, sheet}, {c4, c1, sheet}};
    } else if (kind == 'b') {
        // from lam(2j+1) to lam(2j) slightly above the gap on sheet blk+1, and
        // back slightly below on sheet N; the legs join at the branch points.
        cplx a = C.lam(2 * j + 1), b = C.lam(2 * j);
        cplx dir = (b - a) / std::abs(b - a);
        cplx n = cplx(0, 1) * dir;
        double eps = 0.02 * dmin, adv = 0.08 * std::abs(b - a);
        cplx a1 = a + adv * dir + eps * n, b1 = b - adv * dir + eps * n;
        cplx b2 = b - adv * dir - eps * n, a2 = a + adv * dir - eps * n;
        cp.segments = {{a, a1, blk + 1}, {a1, b1, blk + 1}, {b1, b, blk + 1},
                       {b, b2, C.N},     {b2, a2, C.N},     {a2, a, C.N}};
    } else {
        throw DomainError("cycle_path: kind must be 'a' or 'b'");
    }
    return cp;
}

namespace {

double cross2(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

}  // namespace

int intersection_number(const CyclePath& c1, const CyclePath& c2) {
    int total = 0;
    const double eps = 1e-9;
    for (const auto& s1 : c1.segments) {
        for (const auto& s2 : c2.segments) {
            if (s1.sheet != s2.sheet) continue;
            cplx d1 = s1.b - s1.a, d2 = s2.b - s2.a;
            double den = cross2(d1, d2);
            double L = std::abs(d1) * std::abs(d2);
            if (std::abs(den) < 1e-12 * L) continue;  // parallel
            double t = cross2(s2.a - s1.a, d2) / den;
            double u = cross2(s2.a - s1.a, d1) / den;
            // count transversal crossings of open interiors only
            if (t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps)
                total += (den > 0) ? 1 : -1;
        }
    }
    return total;
}

}  // namespace zn
