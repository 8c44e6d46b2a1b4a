#include "zncurve/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace zn {

namespace {

int popcount(unsigned v) {
    int c = 0;
    for (; v; v >>= 1) c += (int)(v & 1u);
    return c;
}

Characteristics half_int_chars(int g, unsigned dmask, unsigned emask) {
    Characteristics ch;
    ch.delta = Vec::Zero(g);
    ch.eps = Vec::Zero(g);
    for (int i = 0; i < g; ++i) {
        if (dmask & (1u << i)) ch.delta(i) = 0.5;
        if (emask & (1u << i)) ch.eps(i) = 0.5;
    }
    ch.provenance = "half-integer scan";
    return ch;
}

Vec abel_of(const AbelContext& abel, const SheetedPoint& P) {
    return abel_v(abel, P.lambda, P.sheet, P.lambda.imag() >= 0.0);
}

bool same_point(const SheetedPoint& a, const SheetedPoint& b, double sc) {
    return a.sheet == b.sheet && std::abs(a.lambda - b.lambda) < 1e-12 * sc;
}

// (p/q)^{1/(2N)} on the given sheet, built from the same principal-power
// factors as y1 so that its square is exactly y/q and the cuts coincide with
// the branch cuts of the curve.
cplx half_root_pq(const ZnCurve& C, cplx l, int sheet) {
    const double a = 1.0 / (2.0 * C.N);
    cplx r = std::exp(cplx(0.0, PI) * (a + 2.0 * a * (sheet - 1)));
    for (int k = 1; k <= C.m; ++k) r *= std::pow((l - C.lam(2 * k - 1)) / (l - C.lam(2 * k)), a);
    r *= std::pow(C.lam(2 * C.m + 1) - l, a);
    return r;
}

void require_off_cuts(const ZnCurve& C, const SheetedPoint& P) {
    if (find_cut(C, P.lambda) >= 0 || find_branch_point(C, P.lambda))
        throw OnCut("kernel closed form needs a side off the branch cuts");
}

struct LogThetaDerivs {
    Vec grad;  // gradient of log theta[ch] at the point
    Mat hess;  // Hessian of log theta[ch]
};

LogThetaDerivs log_theta_derivs(const Vec& z, const ThetaParams& par, const Characteristics& ch) {
    auto d = theta_derivatives(z, par, ch, 2);
    if (std::abs(d.value) == 0.0) throw ThetaDenominatorZero("log theta derivative at a zero");
    LogThetaDerivs out;
    out.grad = d.grad / d.value;
    out.hess = d.hess / d.value - out.grad * out.grad.transpose();
    return out;
}

}  // namespace

Characteristics find_odd_char(const ThetaParams& params) {
    const int g = (int)params.Pi.rows();
    for (unsigned dmask = 0; dmask < (1u << g); ++dmask) {
        for (unsigned emask = 0; emask < (1u << g); ++emask) {
            if (popcount(dmask & emask) % 2 == 0) continue;  // 4<delta,eps> even
            Characteristics ch = half_int_chars(g, dmask, emask);
            Vec gr = theta_gradient(Vec::Zero(g), params, ch);
            if (gr.norm() > 1e-6) return ch;
        }
    }
    throw NoneFound("find_odd_char: all odd half-integer characteristics are singular");
}

static KernelContext build_context(const ZnCurve& C, const AbelContext& abel,
                                   Characteristics gamma, double theta_tol) {
    KernelContext ctx;
    ctx.C = &C;
    ctx.abel = &abel;
    ctx.params = ThetaParams{abel.P.Pi, theta_tol};
    ctx.gamma = std::move(gamma);
    ctx.grad0 = theta_gradient(Vec::Zero(C.g), ctx.params, ctx.gamma);
    if (ctx.grad0.norm() <= 1e-6)
        throw SingularCharacteristics("kernel context: singular odd characteristic");
    // sign-fixing anchors: generic points high above the configuration
    const double sc = C.scale();
    cplx xc = 0.5 * (C.lam(1) + C.lam(2 * C.m + 1));
    for (cplx l : {xc + cplx(0.13 * sc, 0.81 * sc), xc + cplx(-0.41 * sc, 1.07 * sc),
                   xc + cplx(0.57 * sc, 0.67 * sc)}) {
        SheetedPoint A = sheeted_point(C, l, 1);
        cplx h2 = (ctx.grad0.transpose() * (abel.P.Ainv * du_all(C, A.lambda, A.y, C.q(A.lambda))))(0);
        if (std::abs(h2) < 1e-10) continue;
        ctx.anchors.push_back(A);
        ctx.h_anchor.push_back(std::sqrt(h2));
    }
    if (ctx.anchors.empty()) throw DegenerateH("kernel context: no usable anchor");
    return ctx;
}

KernelContext make_kernel_context(const ZnCurve& C, const AbelContext& abel, double theta_tol) {
    return build_context(C, abel, find_odd_char(ThetaParams{abel.P.Pi, theta_tol}), theta_tol);
}

KernelContext make_kernel_context(const ZnCurve& C, const AbelContext& abel,
                                  const Characteristics& gamma, double theta_tol) {
    return build_context(C, abel, gamma, theta_tol);
}

Vec dv_point(const KernelContext& ctx, const SheetedPoint& P) {
    const ZnCurve& C = *ctx.C;
    return ctx.abel->P.Ainv * du_all(C, P.lambda, P.y, C.q(P.lambda));
}

cplx h_half(const KernelContext& ctx, const SheetedPoint& P) {
    const ZnCurve& C = *ctx.C;
    const double sc = C.scale();
    cplx h2 = (ctx.grad0.transpose() * dv_point(ctx, P))(0);
    if (std::abs(h2) < 1e-12) throw DegenerateH("h vanishes at the sample point");
    cplx principal = std::sqrt(h2);
    Vec vP = abel_of(*ctx.abel, P);
    const Characteristics zero{};
    cplx th00 = theta(Vec::Zero(C.g), ctx.params);
    for (size_t i = 0; i < ctx.anchors.size(); ++i) {
        const SheetedPoint& A = ctx.anchors[i];
        if (same_point(P, A, sc)) return ctx.h_anchor[i];
        Vec x = vP - abel_of(*ctx.abel, A);
        cplx thg = theta(x, ctx.params, ctx.gamma);
        cplx th0 = theta(x, ctx.params);
        if (std::abs(thg) < 1e-8 * std::abs(th00) || std::abs(th0) < 1e-8 * std::abs(th00))
            continue;  // too close to a theta zero for a reliable sign
        cplx s0 = szego_zero(C, P, A);
        if (std::abs(s0) * sc < 1e-6) continue;
        // S[0](P,A) = theta(x) h(P) h(A) / (theta(0) theta[gamma](x))
        cplx cand = s0 * th00 * thg / (th0 * ctx.h_anchor[i]);
        cplx r = cand / principal;
        if (std::abs(r * r - 1.0) > 1e-4)
            throw ConventionMismatch("h sign fix: anchor ratio is not +-1");
        return (r.real() > 0.0) ? principal : -principal;
    }
    throw DegenerateH("h sign fix: no anchor gave a usable reference value");
}

cplx prime_form(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q) {
    Vec x = abel_of(*ctx.abel, P) - abel_of(*ctx.abel, Q);
    return theta(x, ctx.params, ctx.gamma) / (h_half(ctx, P) * h_half(ctx, Q));
}

cplx szego(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q,
           const Characteristics& chars) {
    cplx th0 = theta(Vec::Zero(ctx.C->g), ctx.params, chars);
    cplx scale0 = theta(Vec::Zero(ctx.C->g), ctx.params);
    if (std::abs(th0) < 1e-10 * std::abs(scale0))
        throw SingularCharacteristics("szego: theta constant vanishes");
    Vec x = abel_of(*ctx.abel, P) - abel_of(*ctx.abel, Q);
    return theta(x, ctx.params, chars) / (th0 * prime_form(ctx, P, Q));
}

cplx szego_zero(const ZnCurve& C, const SheetedPoint& P, const SheetedPoint& Q) {
    require_off_cuts(C, P);
    require_off_cuts(C, Q);
    // ratio of the per-point half-roots r = (p/q)^{1/(2N)}; each term is
    // [(q/p)(P) (p/q)(Q)]^{(N-1-2s)/(2N)} = (r(Q)/r(P))^{N-1-2s}
    cplx u = half_root_pq(C, Q.lambda, Q.sheet) / half_root_pq(C, P.lambda, P.sheet);
    cplx sum = 0.0;
    for (int s = 0; s < C.N; ++s) sum += std::pow(u, (double)(C.N - 1 - 2 * s));
    return sum / ((double)C.N * (P.lambda - Q.lambda));
}

Characteristics szego_Dm_characteristics(const AbelContext& abel, const std::vector<int>& I_m) {
    const ZnCurve& C = *abel.C;
    if ((int)I_m.size() != C.m) throw BadArity("szego_Dm: index set must have m elements");
    BranchDivisor D;
    for (int i : I_m) {
        if (i < 1 || i > 2 * C.m + 1) throw DomainError("szego_Dm: index out of range");
        D.weights.push_back({i, C.N - 1});
    }
    std::vector<int> sorted = I_m;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DuplicatePoints("szego_Dm: repeated index");
    Characteristics ch = divisor_characteristics(abel, D, true);
    ch.provenance = "branch divisor kernel characteristics";
    return ch;
}

cplx szego_Dm(const ZnCurve& C, const SheetedPoint& P, const SheetedPoint& Q,
              const std::vector<int>& I_m) {
    require_off_cuts(C, P);
    require_off_cuts(C, Q);
    if ((int)I_m.size() != C.m) throw BadArity("szego_Dm: index set must have m elements");
    std::vector<bool> in_I(2 * C.m + 2, false);
    for (int i : I_m) {
        if (i < 1 || i > 2 * C.m + 1) throw DomainError("szego_Dm: index out of range");
        if (in_I[(size_t)i]) throw DuplicatePoints("szego_Dm: repeated index");
        in_I[(size_t)i] = true;
    }
    const double a = 1.0 / (2.0 * C.N);
    // phi(P) = [prod_{i in I}(l - l_i) / prod_{j notin I}(l - l_j)]^{1/(2N)}
    // with the same branch convention as the Abel map: sheet sigma carries the
    // deck rotation exp(-i pi (sigma-1)/N) of the principal-power product, and
    // the lower half-plane (reached around the left of all branch points, one
    // more rotation step) one extra factor exp(-i pi / N). Within a half-plane
    // the principal powers of the raw differences are holomorphic, so this
    // fixes the branch everywhere off the real axis.
    auto phi = [&](const SheetedPoint& X) {
        cplx v = 1.0;
        for (int k = 1; k <= 2 * C.m + 1; ++k) {
            cplx f = std::pow(X.lambda - C.lam(k), a);
            v = in_I[(size_t)k] ? v * f : v / f;
        }
        int t = (X.sheet - 1) + (X.lambda.imag() < 0.0 ? 1 : 0);
        return v * std::exp(cplx(0.0, -PI) * (double)t / (double)C.N);
    };
    cplx u = phi(Q) / phi(P);
    cplx sum = 0.0;
    for (int s = 0; s < C.N; ++s) sum += std::pow(u, (double)(C.N - 1 - 2 * s));
    return sum / ((double)C.N * (P.lambda - Q.lambda));
}

cplx bergmann(const KernelContext& ctx, const SheetedPoint& P, const SheetedPoint& Q) {
    const ZnCurve& C = *ctx.C;
    const double sc = C.scale();
    if (std::abs(P.lambda - Q.lambda) < 1e-6 * sc && P.sheet == Q.sheet)
        throw StepUnderflow("bergmann: points too close for the difference stencil");
    // d_l d_mu log E = d_l d_mu log theta[gamma](v(P) - v(Q)); the h factors
    // are single-variable and drop out of the mixed derivative.
    auto G = [&](cplx dl, cplx dm) {
        Vec x = abel_v(*ctx.abel, P.lambda + dl, P.sheet, (P.lambda + dl).imag() >= 0.0) -
                abel_v(*ctx.abel, Q.lambda + dm, Q.sheet, (Q.lambda + dm).imag() >= 0.0);
        return theta(x, ctx.params, ctx.gamma);
    };
    auto mixed = [&](double h) {
        cplx r = G(h, h) * G(-h, -h) / (G(h, -h) * G(-h, h));
        return std::log(r) / (4.0 * h * h);
    };
    double h = std::min(0.02 * std::abs(P.lambda - Q.lambda), 2e-3 * sc);
    h = std::max(h, 1e-7 * sc);
    cplx d1 = mixed(h), d2 = mixed(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;  // Richardson: leading error O(h^2)
}

}  // namespace zn
