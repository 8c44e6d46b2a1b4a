#include "zncurve/n3m1.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "zncurve/hypergeometric.hpp"
#include "zncurve/theta.hpp"

namespace zn {

namespace {

const double SQRT3 = std::sqrt(3.0);

cplx F13(cplx z) { return gauss_2f1(1.0 / 3.0, 2.0 / 3.0, 1.0, z); }

// th3(0;6T) th3(0;2T) + th2(0;6T) th2(0;2T) with shifted arguments
cplx theta_pair_sum(cplx e1, cplx e2, cplx T) {
    return jacobi_theta(3, e1, 6.0 * T) * jacobi_theta(3, e2, 2.0 * T) +
           jacobi_theta(2, e1, 6.0 * T) * jacobi_theta(2, e2, 2.0 * T);
}

Mat pi_of_T(cplx T) {
    Mat Pi(2, 2);
    Pi << 2.0 * T, T, T, 2.0 * T;
    return Pi;
}

// roots of the cubic in u = p^2 behind t = p^2 (p^2-9)^2 / (p^2+3)^3:
// (1-t) u^3 - (18+9t) u^2 + (81-27t) u - 27t = 0
std::vector<cplx> p_candidates(cplx t) {
    cplx a3 = 1.0 - t, a2 = -(18.0 + 9.0 * t), a1 = 81.0 - 27.0 * t, a0 = -27.0 * t;
    Mat comp = Mat::Zero(3, 3);
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -a0 / a3;
    comp(1, 2) = -a1 / a3;
    comp(2, 2) = -a2 / a3;
    Eigen::ComplexEigenSolver<Mat> es(comp);
    std::vector<cplx> out;
    for (int i = 0; i < 3; ++i) {
        cplx r = std::sqrt(es.eigenvalues()(i));
        out.push_back(r);
        out.push_back(-r);
    }
    return out;
}

// t(T) and its first three derivatives by trapezoid quadrature of the Cauchy
// integrals on a circle of radius h (t is holomorphic on Im T > 0, so the
// sampled values determine all derivatives to near machine precision).
struct TDerivs {
    cplx t, d1, d2, d3;
};

TDerivs t_derivs(cplx T, double h) {
    const int M = 32;
    TDerivs d{t_of_T(T), 0.0, 0.0, 0.0};
    for (int j = 0; j < M; ++j) {
        cplx w = h * std::exp(TWO_PI_I * (j + 0.5) / double(M));
        cplx tv = t_of_T(T + w);
        d.d1 += tv / w;
        d.d2 += tv / (w * w);
        d.d3 += tv / (w * w * w);
    }
    d.d1 /= M;
    d.d2 *= 2.0 / M;
    d.d3 *= 6.0 / M;
    return d;
}

}  // namespace

EllipticData periods_n3m1(cplx lambda1, cplx lambda2, cplx lambda3) {
    if (lambda1 == lambda2 || lambda2 == lambda3 || lambda1 == lambda3)
        throw DuplicatePoints("branch points must be distinct");
    EllipticData E;
    E.t = (lambda2 - lambda1) / (lambda3 - lambda1);
    if (E.t == 0.0 || E.t == 1.0) throw DomainError("degenerate cross-ratio");
    cplx Ft = F13(E.t), F1t = F13(1.0 - E.t);
    cplx root = std::pow(lambda3 - lambda1, 1.0 / 3.0);
    cplx rho = std::exp(TWO_PI_I / 3.0);
    E.A1 = (2.0 * PI / SQRT3) * (1.0 - rho * rho) / root * Ft;
    E.B1 = TWO_PI_I / root * F1t;
    E.T = (I / SQRT3) * F1t / Ft;
    if (E.T.imag() <= 0.0) throw DomainError("modulus left the upper half plane");
    Moduli M = p_and_moduli(E.T);
    E.p = M.p;
    E.k2_plus = M.k2_plus;
    E.k2_minus = M.k2_minus;
    E.Pi = pi_of_T(E.T);
    return E;
}

cplx t_of_T(cplx T) {
    cplx x = std::pow(jacobi_theta(3, 0.0, 3.0 * T), 4);
    cplx y = std::pow(jacobi_theta(3, 0.0, T), 4);
    return 27.0 * x * (x - y) * (x - y) / std::pow(3.0 * x + y, 3);
}

Moduli p_and_moduli(cplx T) {
    Moduli M;
    cplx t3 = jacobi_theta(3, 0.0, 3.0 * T), t1 = jacobi_theta(3, 0.0, T);
    M.p = 3.0 * t3 * t3 / (t1 * t1);
    cplx p = M.p;
    M.k2_minus = (p + 1.0) * (p + 1.0) * (p + 1.0) * (3.0 - p) / (16.0 * p);
    M.k2_plus = (p + 1.0) * (3.0 - p) * (3.0 - p) * (3.0 - p) / (16.0 * p * p * p);
    M.t = p * p * (p * p - 9.0) * (p * p - 9.0) / std::pow(p * p + 3.0, 3);
    return M;
}

cplx decompose_theta(const Vec& z, const Characteristics& chars, cplx T) {
    if (z.size() != 2 || chars.eps.size() != 2 || chars.delta.size() != 2)
        throw BadArity("the decomposition is specific to genus 2");
    const cplx e1c = chars.eps(0), e2c = chars.eps(1);
    const cplx d1 = chars.delta(0), d2 = chars.delta(1);
    Mat Pi = pi_of_T(T);
    cplx quad = PI * I * (d1 * (Pi(0, 0) * d1 + Pi(0, 1) * d2) + d2 * (Pi(1, 0) * d1 + Pi(1, 1) * d2));
    cplx lin = TWO_PI_I * ((z(0) + e1c) * d1 + (z(1) + e2c) * d2);
    cplx e1 = z(0) + z(1) + e1c + e2c + 3.0 * T * (d1 + d2);
    cplx e2 = z(0) - z(1) + e1c - e2c + T * (d1 - d2);
    return std::exp(quad + lin) * theta_pair_sum(e1, e2, T);
}

Mat Y_jacobi(const RHSolution& sol, cplx lambda, Side side) {
    const ZnCurve& C = *sol.C;
    if (C.N != 3 || C.m != 1) throw BadArity("Jacobi-theta solution is specific to N=3, m=1");
    const Mat& Pi = sol.params.Pi;
    const cplx T = Pi(0, 1);
    if (std::abs(Pi(0, 0) - 2.0 * T) + std::abs(Pi(1, 1) - 2.0 * T) +
            std::abs(Pi(1, 0) - T) > 1e-6)
        throw ConventionMismatch("period matrix is not in the [[2T,T],[T,2T]] form");

    Mat X = canonical_X(C, sol.lambda0, lambda, side);
    bool above = side == Side::plus || (side == Side::automatic && lambda.imag() >= 0.0);
    Vec I0 = abel_du(*sol.abel, lambda, above);

    const cplx eps1 = sol.chars.eps(0), eps2 = sol.chars.eps(1);
    const cplx del1 = sol.chars.delta(0), del2 = sol.chars.delta(1);
    // shift vectors of the transformed characteristics on the 6T / 2T factors
    const cplx a6 = eps1 - 2.0 * eps2 - 3.0 * T * del2;
    const cplx a2 = eps1 + T * (2.0 * del1 + del2);
    const cplx S00 = theta_pair_sum(0.0, 0.0, T);
    const cplx Sa = theta_pair_sum(a6, a2, T);
    if (std::abs(Sa) < 1e-10 * std::abs(S00))
        throw SolvabilityViolation("shifted theta constant vanishes");

    Mat Y(3, 3);
    for (int s = 1; s <= 3; ++s) {
        Vec vs = sol.abel->P.Ainv * I0.cwiseProduct(sheet_rotation(C, s));
        for (int r = 1; r <= 3; ++r) {
            Vec V = vs - sol.v0[r - 1];
            cplx zp = V(0) - 2.0 * V(1);  // dv_+ = dv_1 - 2 dv_2 along the same path
            cplx zm = V(0);               // dv_- = dv_1
            cplx Sz = theta_pair_sum(zp, zm, T);
            if (std::abs(Sz) < 1e-10 * std::abs(S00))
                throw ThetaDenominatorZero("theta-divisor point in the Jacobi form");
            cplx phase = std::exp(TWO_PI_I * (V(0) * del1 + V(1) * del2));
            Y(r - 1, s - 1) = X(r - 1, s - 1) * phase * (S00 / Sa) *
                              theta_pair_sum(zp + a6, zm + a2, T) / Sz;
        }
    }
    return Y;
}

HalphenReport halphen_check(cplx T, double h) {
    if (!(h > 1e-7)) throw StepUnderflow("derivative contour radius too small");
    if (!(h < T.imag())) throw DomainError("derivative contour leaves the upper half plane");
    const double alpha2 = 1.0 / 9.0;  // alpha = 1/3, beta = gamma = 0

    TDerivs d = t_derivs(T, h);
    // omega_i = -(1/2)(tddot/tdot - g_i(t) tdot) for g_1 = (2t-1)/(t^2-t),
    // g_2 = 1/(t-1), g_3 = 1/t; the T-derivative needs only t, tdot, tddot,
    // tdddot through the chain rule.
    cplx t = d.t;
    std::array<cplx, 3> g{(2.0 * t - 1.0) / (t * t - t), 1.0 / (t - 1.0), 1.0 / t};
    std::array<cplx, 3> gp{(2.0 * (t * t - t) - (2.0 * t - 1.0) * (2.0 * t - 1.0)) /
                               ((t * t - t) * (t * t - t)),
                           -1.0 / ((t - 1.0) * (t - 1.0)), -1.0 / (t * t)};
    std::array<cplx, 3> w, wd;
    for (int i = 0; i < 3; ++i) {
        w[i] = -0.5 * (d.d2 / d.d1 - g[i] * d.d1);
        wd[i] = -0.5 * (d.d3 / d.d1 - (d.d2 / d.d1) * (d.d2 / d.d1) - g[i] * d.d2 -
                        gp[i] * d.d1 * d.d1);
    }

    HalphenReport rep;
    rep.omega1 = w[0];
    rep.omega2 = w[1];
    rep.omega3 = w[2];
    rep.R = alpha2 * (w[0] - w[1]) * (w[2] - w[0]);
    cplx r1 = wd[0] - (w[1] * w[2] - w[0] * (w[1] + w[2]) + rep.R);
    cplx r2 = wd[1] - (w[0] * w[2] - w[1] * (w[0] + w[2]) + rep.R);
    cplx r3 = wd[2] - (w[0] * w[1] - w[2] * (w[0] + w[1]) + rep.R);
    rep.halphen_residual = std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
    rep.classical_residual =
        std::max({std::abs(r1 + rep.R), std::abs(r2 + rep.R), std::abs(r3 + rep.R)});

    cplx schwarzian = d.d3 / d.d1 - 1.5 * (d.d2 / d.d1) * (d.d2 / d.d1);
    cplx V = 1.0 / (d.t * d.t) + 1.0 / ((d.t - 1.0) * (d.t - 1.0)) -
             (1.0 + alpha2) / (d.t * (d.t - 1.0));
    rep.schwarzian_residual = std::abs(schwarzian + 0.5 * d.d1 * d.d1 * V);
    return rep;
}

double goursat_check(cplx t) {
    // reference branch: p(T(t)) through the hypergeometric modulus
    cplx T = (I / SQRT3) * F13(1.0 - t) / F13(t);
    cplx p_ref = p_and_moduli(T).p;
    cplx p = p_ref;
    double best = std::numeric_limits<double>::infinity();
    for (cplx cand : p_candidates(t)) {
        if (std::abs(cand - p_ref) < best) {
            best = std::abs(cand - p_ref);
            p = cand;
        }
    }
    if (best > 1e-6 * (1.0 + std::abs(p_ref)))
        throw BranchSelection("no root of the modular sextic matches the hypergeometric branch");
    cplx k2p = (p + 1.0) * (3.0 - p) * (3.0 - p) * (3.0 - p) / (16.0 * p * p * p);
    cplx lhs = (2.0 / SQRT3) * F13(t);
    cplx rhs = 0.5 * (p * p + 3.0) / std::pow(p, 1.5) * gauss_2f1(0.5, 0.5, 1.0, k2p);
    return std::abs(lhs - rhs);
}

cplx tau_n3m1(const std::vector<cplx>& lambdas, const std::vector<cplx>& c,
              const std::vector<cplx>& d) {
    if (lambdas.size() != 3 || c.size() != 2 || d.size() != 2)
        throw BadArity("expected 3 branch points and 2+2 constants");
    for (const auto& x : c)
        if (x == 0.0) throw ZeroConstant("zero jump constant");
    for (const auto& x : d)
        if (x == 0.0) throw ZeroConstant("zero jump constant");
    EllipticData E = periods_n3m1(lambdas[0], lambdas[1], lambdas[2]);
    const cplx T = E.T;
    cplx eps1 = std::log(c[0]) / TWO_PI_I, eps2 = std::log(c[1]) / TWO_PI_I;
    cplx del1 = std::log(d[0]) / TWO_PI_I, del2 = std::log(d[1]) / TWO_PI_I;
    cplx quad = PI * I * (2.0 * T * (del1 * del1 + del2 * del2) + 2.0 * T * del1 * del2) +
                TWO_PI_I * (eps1 * del1 + eps2 * del2);
    cplx num = theta_pair_sum(eps1 + eps2 + 3.0 * T * (del1 + del2),
                              eps1 - eps2 + T * (del1 - del2), T);
    cplx den = theta_pair_sum(0.0, 0.0, T);
    cplx pref = std::pow((lambdas[0] - lambdas[2]) /
                             ((lambdas[0] - lambdas[1]) * (lambdas[1] - lambdas[2])),
                         2.0 / 9.0);
    return pref * std::exp(quad) * num / den;
}

}  // namespace zn
