#include "zncurve/theta.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace zn {

namespace {

// Accumulates the factored lattice sum and its term-by-term z-derivatives.
struct SumState {
    int order = 0;
    cplx value{0.0, 0.0};
    Vec grad;
    Mat hess;
    std::vector<Mat> third;

    void add(const Vec& nd, cplx term) {
        value += term;
        if (order < 1) return;
        Vec f = TWO_PI_I * nd;  // d/dz_i of the exponent
        grad += term * f;
        if (order < 2) return;
        Mat ff = f * f.transpose();
        hess += term * ff;
        if (order < 3) return;
        for (int k = 0; k < nd.size(); ++k) third[(size_t)k] += (term * f(k)) * ff;
    }
};

struct Enumerator {
    const RMat& L;    // Cholesky factor of Im Pi (lower triangular)
    const RVec& mu;   // ellipsoid center in lattice coordinates
    const Vec& delta;
    const Mat& Pi;
    const Vec& w;     // z + eps
    cplx e0;          // factored real exponent
    SumState& st;
    RVec n;

    cplx exponent(const Vec& nd) const {
        return cplx(0.0, PI) * (nd.transpose() * (Pi * nd))(0) +
               TWO_PI_I * (w.transpose() * nd)(0);
    }

    // Coordinate i of L^T (n - mu) is L(i,i)(n_i - mu_i) + carry, where carry
    // collects the already-fixed coordinates above i. rem2 is the squared
    // radius left for coordinates 0..i.
    void run(int i, double rem2, double carry) {
        const double Lii = L(i, i);
        const double s = std::sqrt(std::max(0.0, rem2));
        const long lo = (long)std::ceil(mu(i) + (-s - carry) / Lii - 1e-12);
        const long hi = (long)std::floor(mu(i) + (s - carry) / Lii + 1e-12);
        for (long ni = lo; ni <= hi; ++ni) {
            n(i) = (double)ni;
            const double ri = Lii * (n(i) - mu(i)) + carry;
            const double rem2_next = rem2 - ri * ri;
            if (i == 0) {
                Vec nd = n.cast<cplx>() + delta;
                st.add(nd, std::exp(exponent(nd) - e0));
            } else {
                double carry_next = 0.0;
                for (int j = i; j < (int)n.size(); ++j) carry_next += L(j, i - 1) * (n(j) - mu(j));
                run(i - 1, rem2_next, carry_next);
            }
        }
    }
};

SumState theta_sum(const Vec& z, const ThetaParams& params, const Characteristics& chars,
                   int order) {
    const int g = (int)params.Pi.rows();
    if (params.Pi.cols() != g || z.size() != g) throw BadArity("theta: dimension mismatch");
    Vec eps = chars.eps.size() ? chars.eps : Vec::Zero(g);
    Vec delta = chars.delta.size() ? chars.delta : Vec::Zero(g);
    if (eps.size() != g || delta.size() != g) throw BadArity("theta: characteristics size mismatch");
    if (!(params.tol > 0.0)) throw DomainError("theta: tol must be positive");

    const RMat Y = params.Pi.imag();
    const RMat X = params.Pi.real();
    Eigen::SelfAdjointEigenSolver<RMat> es(Y);
    if (es.eigenvalues().minCoeff() < 1e-8)
        throw IllConditioned("theta: Im Pi nearly singular or indefinite");
    if ((params.Pi - params.Pi.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + Y.norm()))
        throw ConventionMismatch("theta: Pi is not symmetric");

    Eigen::LLT<RMat> llt(Y);
    const RMat L = llt.matrixL();

    const Vec w = z + eps;
    // Re E(n) = -pi (n + Re delta + c)^T Y (n + Re delta + c) + const with
    // c = Y^{-1} (X Im delta + Im(z + eps)); the sum concentrates on an
    // ellipsoid around mu and pi Q > log(1/tol) + margin is discarded.
    const RVec c = llt.solve(X * delta.imag() + w.imag());
    const RVec mu = -delta.real() - c;
    const double rho2 = (std::log(1.0 / params.tol) + 15.0) / PI;

    RVec n0(g);
    for (int i = 0; i < g; ++i) n0(i) = std::round(mu(i));

    SumState st;
    st.order = order;
    if (order >= 1) st.grad = Vec::Zero(g);
    if (order >= 2) st.hess = Mat::Zero(g, g);
    if (order >= 3) st.third.assign((size_t)g, Mat::Zero(g, g));

    Enumerator en{L, mu, delta, params.Pi, w, cplx(0.0), st, RVec::Zero(g)};
    en.e0 = cplx(en.exponent(n0.cast<cplx>() + delta).real(), 0.0);
    en.run(g - 1, rho2, 0.0);

    const cplx scale = std::exp(en.e0);
    st.value *= scale;
    if (order >= 1) st.grad *= scale;
    if (order >= 2) st.hess *= scale;
    if (order >= 3)
        for (auto& T : st.third) T *= scale;
    return st;
}

}  // namespace

cplx theta(const Vec& z, const ThetaParams& params, const Characteristics& chars) {
    return theta_sum(z, params, chars, 0).value;
}

cplx theta(const Vec& z, const ThetaParams& params) { return theta(z, params, Characteristics{}); }

Vec theta_gradient(const Vec& z, const ThetaParams& params, const Characteristics& chars) {
    return theta_sum(z, params, chars, 1).grad;
}

Mat theta_hessian(const Vec& z, const ThetaParams& params, const Characteristics& chars) {
    return theta_sum(z, params, chars, 2).hess;
}

ThetaDerivatives theta_derivatives(const Vec& z, const ThetaParams& params,
                                   const Characteristics& chars, int order) {
    if (order < 0 || order > 3) throw BadArity("theta_derivatives: order must be 0..3");
    SumState st = theta_sum(z, params, chars, order);
    ThetaDerivatives out;
    out.value = st.value;
    out.grad = std::move(st.grad);
    out.hess = std::move(st.hess);
    out.third = std::move(st.third);
    return out;
}

cplx jacobi_theta(int k, cplx z, cplx tau) {
    if (k != 2 && k != 3) throw BadArity("jacobi_theta: k must be 2 or 3");
    if (tau.imag() < 1e-8) throw IllConditioned("jacobi_theta: Im tau too small");
    const double a = (k == 2) ? 0.5 : 0.0;
    auto expo = [&](double n) {
        return cplx(0.0, PI) * tau * (n + a) * (n + a) + TWO_PI_I * (n + a) * z;
    };
    const long n0 = std::lround(-z.imag() / tau.imag() - a);
    const cplx e0(expo((double)n0).real(), 0.0);
    cplx sum = std::exp(expo((double)n0) - e0);
    for (int dir : {1, -1}) {
        int small_run = 0;
        for (long j = 1; j < 100000 && small_run < 3; ++j) {
            cplx t = std::exp(expo((double)(n0 + dir * j)) - e0);
            sum += t;
            small_run = (std::abs(t) < 1e-18) ? small_run + 1 : 0;
        }
    }
    return std::exp(e0) * sum;
}

}  // namespace zn
