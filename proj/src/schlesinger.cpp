#include "zncurve/schlesinger.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace zn {

namespace {

cplx ipow(cplx b, int e) {
    cplx r = 1.0;
    bool inv = e < 0;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return inv ? 1.0 / r : r;
}

double contour_radius(const ZnCurve& C, int k) {
    double r = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 2 * C.m + 1; ++j)
        if (j != k) r = std::min(r, std::abs(C.lam(k) - C.lam(j)));
    return r / 8.0;
}

// Samples of w = lambda - lambda_k and f = Y'(lambda) Y(lambda)^{-1} on the
// residue circle. Node angles avoid the real axis; a run that hits the theta
// divisor restarts with rotated nodes.
std::vector<std::pair<cplx, Mat>> circle_samples(const RHSolution& sol, int k, int nodes) {
    const ZnCurve& C = *sol.C;
    const double r = contour_radius(C, k);
    const double e = 1e-5 * r;
    const cplx lk = C.lam(k);
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<std::pair<cplx, Mat>> out;
        out.reserve(nodes);
        try {
            for (int j = 0; j < nodes; ++j) {
                double th = 2.0 * PI * (j + 0.5 + 0.13 * attempt) / nodes;
                cplx w = r * std::exp(I * th);
                cplx z = lk + w;
                Mat Yp = rh_Y(sol, z + e);
                Mat Ym = rh_Y(sol, z - e);
                Mat Y = rh_Y(sol, z);
                Mat f = ((Yp - Ym) / (2.0 * e)) * Y.partialPivLu().inverse();
                out.emplace_back(w, std::move(f));
            }
            return out;
        } catch (const ThetaDenominatorZero&) {
            continue;
        }
    }
    throw AmbiguousMatching("residue contour kept hitting the theta divisor");
}

Mat residue_matrix(const RHSolution& sol, int k) {
    auto samples = circle_samples(sol, k, 16);
    const int N = sol.C->N;
    Mat acc = Mat::Zero(N, N);
    for (const auto& [w, f] : samples) acc += f * w;
    return acc / static_cast<double>(samples.size());
}

// Geometry entering the closed-form A_k that has to be re-assembled at
// perturbed branch-point configurations: the normalized differential
// coefficients dv/dlambda at the base point on every sheet, and the Abel
// differences z_rs between base-point sheets.
struct GeomData {
    std::vector<Vec> D;               // D[s-1] = dv/dlambda at lambda0, sheet s
    std::vector<std::vector<Vec>> z;  // z[r-1][s-1] = v(lambda0, s) - v(lambda0, r)
};

GeomData geometry_at(const ZnCurve& C, const AbelContext& abel, cplx l0) {
    const int N = C.N;
    GeomData geo;
    geo.D.resize(N);
    geo.z.assign(N, std::vector<Vec>(N));
    Vec I0 = abel_du(abel, l0);
    std::vector<Vec> v(N);
    for (int s = 1; s <= N; ++s) {
        v[s - 1] = abel.P.Ainv * I0.cwiseProduct(sheet_rotation(C, s));
        geo.D[s - 1] = abel.P.Ainv * du_all(C, l0, y_value(C, l0, s), C.q(l0));
    }
    for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) geo.z[r][s] = v[s] - v[r];
    return geo;
}

GeomData geometry_perturbed(const ZnCurve& C, cplx l0, int k, double h) {
    std::vector<cplx> ls = C.lambda;
    ls[k - 1] += h;
    ZnCurve Cp = make_curve(C.N, ls);
    AbelContext ab = make_abel(Cp);
    return geometry_at(Cp, ab, l0);
}

// Directional derivative of theta objects along dPi (heat equation):
// d theta = (1/(4 pi i)) sum_{ij} H_ij dPi_ij, and for the gradient the same
// contraction of the third-derivative tensor.
cplx heat_value(const Mat& H, const Mat& Pdot) { return (H.cwiseProduct(Pdot)).sum() / (4.0 * PI * I); }

Vec heat_gradient(const std::vector<Mat>& third, const Mat& Pdot) {
    Vec out(static_cast<int>(third.size()));
    for (int l = 0; l < out.size(); ++l) out(l) = heat_value(third[l], Pdot);
    return out;
}

std::vector<cplx> pair_exponent_derivatives(const ZnCurve& C) {
    // d/dlambda_k of log of the tau product factor: exponent
    // (N^2-1)/(12N) with sign (-1)^{j+k} per pair.
    const int K = 2 * C.m + 1;
    const double e3 = (C.N * C.N - 1) / (12.0 * C.N);
    std::vector<cplx> out(K + 1, 0.0);
    for (int k = 1; k <= K; ++k)
        for (int j = 1; j <= K; ++j)
            if (j != k) out[k] += e3 * (((j + k) % 2 == 0) ? 1.0 : -1.0) / (C.lam(k) - C.lam(j));
    return out;
}

}  // namespace

SchlesingerData a_matrices_residue(const RHSolution& sol) {
    const int N = sol.C->N, K = 2 * sol.C->m + 1;
    SchlesingerData S;
    S.lambda0 = sol.lambda0;
    S.source = "residue-oracle";
    S.A.assign(K + 1, Mat::Zero(N, N));
    S.A_inf = Mat::Zero(N, N);
    for (int k = 1; k <= K; ++k) {
        S.A[k] = residue_matrix(sol, k);
        S.A_inf -= S.A[k];
    }
    return S;
}

SchlesingerData a_matrices_closed(const RHSolution& sol) {
    const ZnCurve& C = *sol.C;
    const int N = C.N, K = 2 * C.m + 1;
    const cplx l0 = sol.lambda0;
    const ThetaParams& params = sol.params;
    const Characteristics& ch = sol.chars;
    const Characteristics none{Vec::Zero(C.g), Vec::Zero(C.g), ""};
    const double h = 1e-4 * C.scale();

    GeomData geo = geometry_at(C, *sol.abel, l0);

    // theta data at the fixed arguments
    ThetaDerivatives t0c = theta_derivatives(Vec::Zero(C.g), params, ch, 3);
    ThetaDerivatives t00 = theta_derivatives(Vec::Zero(C.g), params, none, 2);
    std::vector<std::vector<ThetaDerivatives>> tzc(N, std::vector<ThetaDerivatives>(N));
    std::vector<std::vector<ThetaDerivatives>> tz0(N, std::vector<ThetaDerivatives>(N));
    for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) {
            if (r == s) continue;
            tzc[r][s] = theta_derivatives(geo.z[r][s], params, ch, 2);
            tz0[r][s] = theta_derivatives(geo.z[r][s], params, none, 2);
            if (std::abs(tzc[r][s].value) < 1e-12 * std::abs(sol.theta_ch0) ||
                std::abs(tz0[r][s].value) < 1e-12 * std::abs(sol.theta0))
                throw ThetaDenominatorZero("base-point sheet difference lies on the theta divisor");
        }

    // off-diagonal structure constants
    Mat crs = Mat::Zero(N, N);
    for (int r = 1; r <= N; ++r)
        for (int s = 1; s <= N; ++s)
            for (int l = 0; l < N; ++l)
                crs(r - 1, s - 1) +=
                    (static_cast<double>(l) / (N * N)) *
                    std::exp(TWO_PI_I * (static_cast<double>(r - s) / (2.0 * N)) *
                             static_cast<double>(2 * l - N + 1));

    const cplx g0 = -C.dlog_pq(l0);  // d/dlambda0 log(q/p)(lambda0)

    SchlesingerData S;
    S.lambda0 = l0;
    S.source = "closed-form";
    S.A.assign(K + 1, Mat::Zero(N, N));
    S.A_inf = Mat::Zero(N, N);

    for (int k = 1; k <= K; ++k) {
        const cplx dk = l0 - C.lam(k);
        const double sk = (k % 2 == 1) ? 1.0 : -1.0;
        Mat Pdot = rauch_derivative(C, sol.abel->P, k);

        // heat-equation derivatives of the theta constants
        cplx th0c_dot = heat_value(t0c.hess, Pdot);
        cplx th00_dot = heat_value(t00.hess, Pdot);
        Vec grad0c_dot = heat_gradient(t0c.third, Pdot);

        // geometry derivatives by central differences over re-assembled
        // period data at the perturbed configuration
        GeomData gp = geometry_perturbed(C, l0, k, h);
        GeomData gm = geometry_perturbed(C, l0, k, -h);

        Mat A = Mat::Zero(N, N);
        for (int s = 0; s < N; ++s) {
            // d/dlambda_k sum_l (grad log theta[ch](0))_l D^(s)_l
            Vec Ddot = (gp.D[s] - gm.D[s]) / (2.0 * h);
            Vec Ldot = grad0c_dot / t0c.value - t0c.grad * th0c_dot / (t0c.value * t0c.value);
            cplx diag = Ldot.cwiseProduct(geo.D[s]).sum();
            diag += (t0c.grad / t0c.value).cwiseProduct(Ddot).sum();
            A(s, s) = dk * dk * diag;
        }
        for (int r = 0; r < N; ++r)
            for (int s = 0; s < N; ++s) {
                if (r == s) continue;
                const auto& tc = tzc[r][s];
                const auto& t0 = tz0[r][s];
                cplx R = (tc.value / t0.value) * (t00.value / t0c.value);
                Vec zdot = (gp.z[r][s] - gm.z[r][s]) / (2.0 * h);
                cplx Rlog = (tc.grad / tc.value - t0.grad / t0.value).cwiseProduct(zdot).sum();
                Rlog += heat_value(tc.hess, Pdot) / tc.value - heat_value(t0.hess, Pdot) / t0.value;
                Rlog += th00_dot / t00.value - th0c_dot / t0c.value;
                cplx g0dot = -sk / (dk * dk);
                A(r, s) = dk * dk * crs(r, s) * (g0dot * R + g0 * R * Rlog);
            }
        S.A[k] = A;
        S.A_inf -= A;
    }
    return S;
}

double schlesinger_residual(const ZnCurve& C, const MonodromySet& mono, cplx lambda0, double h,
                            bool include_base_terms) {
    const int N = C.N, K = 2 * C.m + 1;
    auto A_at = [&](int j, double dh) {
        std::vector<cplx> ls = C.lambda;
        if (j > 0) ls[j - 1] += dh;
        ZnCurve Cp = make_curve(N, ls);
        AbelContext ab = make_abel(Cp);
        RHSolution sol = solve_Y(Cp, ab, mono, lambda0);
        return a_matrices_residue(sol).A;
    };

    std::vector<Mat> A = A_at(0, 0.0);
    double worst = 0.0;
    for (int j = 1; j <= K; ++j) {
        // Richardson-extrapolated central difference in lambda_j
        std::vector<Mat> p1 = A_at(j, h), m1 = A_at(j, -h);
        std::vector<Mat> p2 = A_at(j, h / 2), m2 = A_at(j, -h / 2);
        std::vector<Mat> dA(K + 1);
        for (int k = 1; k <= K; ++k) {
            Mat d1 = (p1[k] - m1[k]) / (2.0 * h);
            Mat d2 = (p2[k] - m2[k]) / h;
            dA[k] = (4.0 * d2 - d1) / 3.0;
        }
        for (int k = 1; k <= K; ++k) {
            Mat rhs = Mat::Zero(N, N);
            if (k != j) {
                Mat comm = A[k] * A[j] - A[j] * A[k];
                rhs = comm / (C.lam(k) - C.lam(j));
                if (include_base_terms) rhs -= comm / (lambda0 - C.lam(j));
            } else {
                // the lambda0 terms cancel on the diagonal:
                // [A_k/(lambda0-lambda_k), A_k] = 0
                for (int i = 1; i <= K; ++i) {
                    if (i == k) continue;
                    Mat comm = A[k] * A[i] - A[i] * A[k];
                    rhs -= comm / (C.lam(k) - C.lam(i));
                }
            }
            worst = std::max(worst, (dA[k] - rhs).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

TauReport tau(const ZnCurve& C, const AbelContext& abel, const MonodromySet& mono) {
    if (mono.N != C.N || mono.m != C.m) throw BadArity("monodromy data does not match the curve");
    const int N = C.N, m = C.m, K = 2 * m + 1;
    Characteristics ch = chars_from_constants(mono);
    ThetaParams params{abel.P.Pi, 1e-13};
    cplx th0 = theta(Vec::Zero(C.g), params);
    cplx thc = theta(Vec::Zero(C.g), params, ch);
    if (std::abs(thc) < 1e-10 * std::abs(th0))
        throw SolvabilityViolation("theta constant vanishes: tau on the Malgrange divisor");

    const double e1 = (N * N - 1) / (6.0 * N);
    const double e3 = (N * N - 1) / (12.0 * N);
    cplx prod = 1.0;
    for (int a = 0; a <= m; ++a)
        for (int b = a + 1; b <= m; ++b) prod *= std::pow(C.lam(2 * a + 1) - C.lam(2 * b + 1), e1);
    for (int a = 1; a <= m; ++a)
        for (int b = a + 1; b <= m; ++b) prod *= std::pow(C.lam(2 * a) - C.lam(2 * b), e1);
    for (int a = 1; a <= K; ++a)
        for (int b = a + 1; b <= K; ++b) prod /= std::pow(C.lam(a) - C.lam(b), e3);

    TauReport rep;
    rep.theta_ratio = thc / th0;
    rep.product_factor = prod;
    rep.value = rep.theta_ratio * rep.product_factor;
    rep.log_derivatives = Vec(K);

    Characteristics none{Vec::Zero(C.g), Vec::Zero(C.g), ""};
    Mat Hc = theta_hessian(Vec::Zero(C.g), params, ch);
    Mat H0 = theta_hessian(Vec::Zero(C.g), params, none);
    std::vector<cplx> prod_dot = pair_exponent_derivatives(C);
    for (int k = 1; k <= K; ++k) {
        Mat Pdot = rauch_derivative(C, abel.P, k);
        rep.log_derivatives(k - 1) =
            heat_value(Hc, Pdot) / thc - heat_value(H0, Pdot) / th0 + prod_dot[k];
    }
    return rep;
}

cplx tau_log_derivative_residue(const RHSolution& sol, int k) {
    if (k < 1 || k > 2 * sol.C->m + 1) throw DomainError("branch point index out of range");
    auto samples = circle_samples(sol, k, 16);
    cplx acc = 0.0;
    for (const auto& [w, f] : samples) acc += (f * f).trace() * w;
    return 0.5 * acc / static_cast<double>(samples.size());
}

double thomae_check(const ZnCurve& C, const PeriodData& P) {
    const int N = C.N, m = C.m;
    ThetaParams params{P.Pi, 1e-13};
    cplx lhs = ipow(theta(Vec::Zero(C.g), params), 8);
    cplx rhs = 1.0 / ipow(TWO_PI_I, 4 * (N - 1) * m);
    for (int s = 0; s < N - 1; ++s) rhs *= ipow(P.A.block(s * m, 0, m, m).determinant(), 4);
    for (int a = 1; a <= m; ++a)
        for (int b = a + 1; b <= m; ++b) rhs *= ipow(C.lam(2 * a) - C.lam(2 * b), 2 * (N - 1));
    for (int a = 0; a <= m; ++a)
        for (int b = a + 1; b <= m; ++b)
            rhs *= ipow(C.lam(2 * a + 1) - C.lam(2 * b + 1), 2 * (N - 1));
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

std::vector<double> malgrange_probe(const AbelContext& abel,
                                    const std::vector<Characteristics>& chars) {
    ThetaParams params{abel.P.Pi, 1e-13};
    const int g = static_cast<int>(abel.P.Pi.rows());
    cplx th0 = theta(Vec::Zero(g), params);
    std::vector<double> out;
    out.reserve(chars.size());
    for (const auto& ch : chars)
        out.push_back(std::abs(theta(Vec::Zero(g), params, ch)) / std::abs(th0));
    return out;
}

}  // namespace zn
