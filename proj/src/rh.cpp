#include "zncurve/rh.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace zn {

namespace {

// 0-based position of the constant with 1-based cell index k and block s.
int idx(int k, int s, int m) { return (k - 1) + s * m; }

Mat cyclic_P(int N) {
    Mat P = Mat::Zero(N, N);
    for (int j = 2; j <= N; ++j) P(j - 1, j - 2) = 1.0;
    P(0, N - 1) = (N % 2 == 1) ? 1.0 : -1.0;
    return P;
}

cplx ipow(cplx z, int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    cplx r = 1.0;
    while (e--) r *= z;
    return r;
}

bool nth_root_of_unity(cplx z, int N, double tol) {
    return std::abs(ipow(z, N) - 1.0) < tol;
}

// Sheet-1 branch of (p/q)^{1/(2N)} with the cuts of the curve; `side` picks
// the boundary value for real lambda on a cut or the ray. The factor
// (lam_{2m+1} - l) is reversed, so its boundary side is flipped.
cplx half_root_side(const ZnCurve& C, cplx l, Side side) {
    const double a = 1.0 / (2.0 * C.N);
    const double sgn = (side == Side::minus) ? -1.0 : 1.0;
    auto pw = [](cplx z, double e, double s) -> cplx {
        if (z.imag() == 0.0 && z.real() < 0.0)
            return std::pow(-z.real(), e) * std::exp(cplx(0.0, s * PI * e));
        return std::pow(z, e);
    };
    cplx r = std::exp(cplx(0.0, PI) * a);
    for (int k = 1; k <= C.m; ++k) {
        r *= pw(l - C.lam(2 * k - 1), a, sgn);
        r /= pw(l - C.lam(2 * k), a, sgn);
    }
    r *= pw(C.lam(2 * C.m + 1) - l, a, -sgn);
    return r;
}

Vec normalized_v(const AbelContext& abel, const Vec& du, int sheet) {
    Vec I = du.cwiseProduct(sheet_rotation(*abel.C, sheet));
    return abel.P.Ainv * I;
}

}  // namespace

MonodromySet build_monodromy(int N, int m, const std::vector<cplx>& c,
                             const std::vector<cplx>& d) {
    if (N < 2 || m < 1) throw DomainError("build_monodromy: need N >= 2 and m >= 1");
    const size_t want = (size_t)(N - 1) * (size_t)m;
    if (c.size() != want || d.size() != want)
        throw BadArity("build_monodromy: need (N-1)m constants of each kind");
    for (const auto& z : c)
        if (z == 0.0) throw ZeroConstant("build_monodromy: zero c constant");
    for (const auto& z : d)
        if (z == 0.0) throw ZeroConstant("build_monodromy: zero d constant");

    MonodromySet ms;
    ms.N = N;
    ms.m = m;
    ms.c = c;
    ms.d = d;
    ms.P = cyclic_P(N);
    ms.sigma = RVec(N);
    for (int j = 1; j <= N; ++j) ms.sigma(j - 1) = (2.0 * j - 1.0 - N) / (2.0 * N);

    ms.U = Mat(N, N);
    ms.Uinv = Mat(N, N);
    for (int j = 1; j <= N; ++j) {
        const cplx mu = std::exp(cplx(0.0, PI) * (2.0 * j - 1.0 - N) / (double)N);
        for (int i = 1; i <= N; ++i) {
            ms.U(i - 1, j - 1) = ipow(mu, -(i - 1));
            ms.Uinv(j - 1, i - 1) = ipow(mu, i - 1) / (double)N;
        }
    }

    ms.G.assign(2 * m + 3, Mat::Identity(N, N));
    for (int k = 1; k <= m; ++k) {
        Mat Godd = Mat::Zero(N, N);
        Godd(0, N - 1) = ((N % 2 == 1) ? 1.0 : -1.0) * c[idx(k, 0, m)];
        for (int j = 1; j <= N - 2; ++j)
            Godd(j, j - 1) = c[idx(k, j, m)] / c[idx(k, j - 1, m)];
        Godd(N - 1, N - 2) = 1.0 / c[idx(k, N - 2, m)];
        ms.G[2 * k - 1] = Godd;

        Vec diag(N);
        cplx prod = 1.0;
        for (int s = 0; s <= N - 2; ++s) {
            diag(s) = d[idx(k, s, m)];
            prod *= diag(s);
        }
        diag(N - 1) = 1.0 / prod;
        ms.G[2 * k] = Mat(diag.asDiagonal());
    }
    ms.G[2 * m + 1] = ms.P;

    ms.M.assign(2 * m + 3, Mat());
    for (int k = 1; k <= 2 * m + 2; ++k)
        ms.M[k] = ms.G[k] * ms.G[k - 1].partialPivLu().inverse();
    return ms;
}

bool is_reducible(const MonodromySet& mono, double tol) {
    for (int k = 1; k <= mono.m; ++k) {
        const cplx xi = mono.c[idx(k, 0, mono.m)];
        const cplx zeta = mono.d[idx(k, 0, mono.m)];
        if (!nth_root_of_unity(xi, mono.N, tol) || !nth_root_of_unity(zeta, mono.N, tol))
            return false;
        for (int s = 0; s <= mono.N - 2; ++s) {
            if (std::abs(mono.c[idx(k, s, mono.m)] - ipow(xi, s + 1)) > tol) return false;
            if (std::abs(mono.d[idx(k, s, mono.m)] - zeta) > tol) return false;
        }
    }
    return true;
}

Characteristics chars_from_constants(const MonodromySet& mono) {
    const int N = mono.N, m = mono.m, g = (N - 1) * m;
    Characteristics ch;
    ch.eps = Vec::Zero(g);
    ch.delta = Vec::Zero(g);
    for (int s = 0; s <= N - 2; ++s)
        for (int k = 1; k <= m - 1; ++k)
            ch.eps(idx(k, s, m)) =
                std::log(mono.c[idx(k, s, m)] / mono.c[idx(k + 1, s, m)]) / TWO_PI_I;
    for (int s = 1; s <= N - 1; ++s)
        ch.eps(s * m - 1) = std::log(mono.c[s * m - 1]) / TWO_PI_I;
    for (int i = 0; i < g; ++i) ch.delta(i) = std::log(mono.d[i]) / TWO_PI_I;
    ch.provenance = "principal logs of monodromy constants";
    return ch;
}

int segment_index(const ZnCurve& C, double x) {
    int seg = 0;
    for (int k = 1; k <= 2 * C.m + 1; ++k) {
        if (x >= C.lam(k).real())
            seg = k;
        else
            break;
    }
    return seg;
}

Mat canonical_X(const ZnCurve& C, cplx lambda0, cplx lambda, Side side) {
    const int N = C.N;
    if (find_branch_point(C, lambda)) throw OnBranchPoint("canonical_X: lambda at a branch point");
    if (find_branch_point(C, lambda0) ||
        (lambda0.imag() == 0.0 && segment_index(C, lambda0.real()) > 0))
        throw DomainError("canonical_X: base point on the contour");
    if (lambda.imag() == 0.0 && side == Side::automatic) {
        const int seg = segment_index(C, lambda.real());
        if (seg % 2 == 1 || seg == 2 * C.m + 1)
            throw OnCut("canonical_X: real point on a cut or the ray needs a side");
    }
    const cplx u = half_root_side(C, lambda, side) / half_root_side(C, lambda0, Side::plus);
    Mat X(N, N);
    for (int r = 1; r <= N; ++r)
        for (int s = 1; s <= N; ++s) {
            cplx sum = 0.0;
            for (int k = 0; k < N; ++k) {
                const int e = N - 1 - 2 * k;
                sum += std::exp(cplx(0.0, PI) * (double)((s - r) * e) / (double)N) * ipow(u, e);
            }
            X(r - 1, s - 1) = sum / (double)N;
        }
    return X;
}

RHSolution solve_Y(const ZnCurve& C, const AbelContext& abel, const MonodromySet& mono,
                   cplx lambda0) {
    if (mono.N != C.N || mono.m != C.m)
        throw BadArity("solve_Y: monodromy set does not match the curve");
    if (find_branch_point(C, lambda0) ||
        (lambda0.imag() == 0.0 && segment_index(C, lambda0.real()) > 0))
        throw DomainError("solve_Y: base point must lie off the contour");

    RHSolution sol;
    sol.C = &C;
    sol.abel = &abel;
    sol.mono = mono;
    sol.lambda0 = lambda0;
    sol.chars = chars_from_constants(mono);
    sol.params.Pi = abel.P.Pi;
    sol.params.tol = 1e-12;

    const Vec z0 = Vec::Zero(C.g);
    sol.theta0 = theta(z0, sol.params);
    sol.theta_ch0 = theta(z0, sol.params, sol.chars);
    if (std::abs(sol.theta_ch0) < 1e-10 * std::abs(sol.theta0))
        throw SolvabilityViolation("solve_Y: theta[chars](0) vanishes (Malgrange divisor)");

    const Vec du = abel_du(abel, lambda0, lambda0.imag() >= 0.0);
    for (int s = 1; s <= C.N; ++s) sol.v0.push_back(normalized_v(abel, du, s));
    return sol;
}

Mat rh_Y(const RHSolution& sol, cplx lambda, Side side) {
    const ZnCurve& C = *sol.C;
    const int N = C.N;
    if (find_branch_point(C, lambda)) throw OnBranchPoint("rh_Y: lambda at a branch point");

    bool above;
    if (lambda.imag() != 0.0) {
        above = lambda.imag() > 0.0;
    } else if (segment_index(C, lambda.real()) == 0) {
        above = true;  // left of lambda_1 the solution is continuous
    } else if (side == Side::automatic) {
        throw OnCut("rh_Y: real point on the contour needs a side");
    } else {
        above = (side == Side::plus);
    }

    const Side bside = above ? Side::plus : Side::minus;
    const Mat X = canonical_X(C, sol.lambda0, lambda, bside);
    const Vec du = abel_du(*sol.abel, lambda, above);
    std::vector<Vec> v(N);
    for (int s = 1; s <= N; ++s) v[s - 1] = normalized_v(*sol.abel, du, s);

    Mat Y(N, N);
    for (int r = 1; r <= N; ++r)
        for (int s = 1; s <= N; ++s) {
            const Vec z = v[s - 1] - sol.v0[r - 1];
            const cplx den = theta(z, sol.params);
            if (std::abs(den) < 1e-10 * std::abs(sol.theta0))
                throw ThetaDenominatorZero("rh_Y: sample point on the theta divisor");
            const cplx num = theta(z, sol.params, sol.chars);
            Y(r - 1, s - 1) = X(r - 1, s - 1) * (num / den) * (sol.theta0 / sol.theta_ch0);
        }
    return Y;
}

namespace {

// One-sided boundary values on segment `seg` give its jump Y_+^{-1} Y_-.
// Tries a few abscissae to stay clear of the theta divisor.
Mat segment_jump(const RHSolution& sol, int seg) {
    const ZnCurve& C = *sol.C;
    static const double fr[5] = {0.5, 0.37, 0.63, 0.44, 0.56};
    const double sc = C.scale();
    for (int t = 0; t < 5; ++t) {
        double x;
        if (seg == 0)
            x = C.lam(1).real() - (0.3 + 0.5 * fr[t]) * sc;
        else if (seg == 2 * C.m + 1)
            x = C.lam(2 * C.m + 1).real() + (0.3 + 0.5 * fr[t]) * sc;
        else
            x = C.lam(seg).real() + fr[t] * (C.lam(seg + 1).real() - C.lam(seg).real());
        try {
            const Mat Yp = rh_Y(sol, x, Side::plus);
            const Mat Ym = rh_Y(sol, x, Side::minus);
            return Yp.partialPivLu().solve(Ym);
        } catch (const ThetaDenominatorZero&) {
            continue;
        }
    }
    throw AmbiguousMatching("segment_jump: no sample clear of the theta divisor");
}

}  // namespace

Mat monodromy_of_solution(const RHSolution& sol, int k) {
    const ZnCurve& C = *sol.C;
    const int last = 2 * C.m + 2;
    if (k < 1 || k > last) throw DomainError("monodromy_of_solution: k out of range");
    if (k < last) {
        // counterclockwise around lambda_k: down across segment k-1, up across k
        const Mat JL = segment_jump(sol, k - 1);
        const Mat JR = segment_jump(sol, k);
        return JR * JL.partialPivLu().inverse();
    }
    // around infinity: down across the ray, up across the left segment
    const Mat JR = segment_jump(sol, 2 * C.m + 1);
    const Mat JL = segment_jump(sol, 0);
    return JL * JR.partialPivLu().inverse();
}

ShiftReport shift_check(const RHSolution& sol, const Characteristics& shift) {
    const ZnCurve& C = *sol.C;
    const int N = C.N;

    RHSolution shifted = sol;
    shifted.chars.eps = sol.chars.eps + shift.eps;
    shifted.chars.delta = sol.chars.delta + shift.delta;
    shifted.chars.provenance = "shifted by divisor characteristics";
    shifted.theta_ch0 = theta(Vec::Zero(C.g), shifted.params, shifted.chars);
    if (std::abs(shifted.theta_ch0) < 1e-10 * std::abs(shifted.theta0))
        throw SolvabilityViolation("shift_check: shifted characteristics are singular");

    const int last = 2 * C.m + 2;
    ShiftReport rep;
    rep.multiplier.assign(last + 1, cplx(0.0));
    rep.j.assign(last + 1, 0);

    // generic upper-half-plane point for the single-valuedness check
    const cplx lt(C.lam(1).real() + 0.43 * (C.lam(2 * C.m + 1).real() - C.lam(1).real()),
                  0.81 * C.scale());
    const Mat Y = rh_Y(sol, lt);
    const Mat Yt = rh_Y(shifted, lt);
    auto nth_power_ratio = [&](const Mat& A, const Mat& B) {
        Mat F(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) F(i, j) = ipow(A(i, j) / B(i, j), N);
        return F;
    };
    const Mat F = nth_power_ratio(Yt, Y);

    int jsum = 0;
    for (int k = 1; k <= last; ++k) {
        const Mat Mk = monodromy_of_solution(sol, k);
        const Mat Mtk = monodromy_of_solution(shifted, k);
        int bi = 0, bj = 0;
        Mk.cwiseAbs().maxCoeff(&bi, &bj);
        const cplx w = Mtk(bi, bj) / Mk(bi, bj);
        rep.multiplier[k] = w;
        const double scale = Mk.cwiseAbs().maxCoeff();
        rep.max_multiplier_residual =
            std::max(rep.max_multiplier_residual, (Mtk - w * Mk).cwiseAbs().maxCoeff() / scale);
        int jk = (int)std::lround(std::arg(w) * N / (2.0 * PI));
        jk = ((jk % N) + N) % N;
        rep.j[k] = jk;
        jsum += jk;
        rep.max_multiplier_residual = std::max(
            rep.max_multiplier_residual, std::abs(w - std::exp(TWO_PI_I * (double)jk / (double)N)));

        // continuing around lambda_k carries the point on sheet s to sheet
        // pi(s), the row of the single dominant entry in column s of M_k:
        // single-valuedness on the curve means Fc(r, s) = F(r, pi(s)).
        const Mat Fc = nth_power_ratio(Yt * Mtk, Y * Mk);
        for (int s = 0; s < N; ++s) {
            int pi = 0, dummy = 0;
            Mk.col(s).cwiseAbs().maxCoeff(&pi, &dummy);
            for (int r = 0; r < N; ++r)
                rep.max_single_valued_residual =
                    std::max(rep.max_single_valued_residual,
                             std::abs(Fc(r, s) - F(r, pi)) /
                                 std::max(1.0, F.cwiseAbs().maxCoeff()));
        }
    }
    rep.j_sum_mod_N = ((jsum % N) + N) % N;
    return rep;
}

}  // namespace zn
