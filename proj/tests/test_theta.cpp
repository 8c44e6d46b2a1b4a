#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "zncurve/periods.hpp"
#include "zncurve/theta.hpp"

using namespace zn;

namespace {

Mat pi2() {
    Mat P(2, 2);
    P << cplx(0.3, 1.1), cplx(0.1, 0.4), cplx(0.1, 0.4), cplx(-0.2, 0.9);
    return P;
}

Characteristics rand_chars(int g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.6, 0.6), v(-0.3, 0.3);
    Characteristics ch;
    ch.eps = Vec(g);
    ch.delta = Vec(g);
    for (int i = 0; i < g; ++i) {
        ch.eps(i) = cplx(u(rng), v(rng));
        ch.delta(i) = cplx(u(rng), v(rng));
    }
    return ch;
}

Vec rand_z(int g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.2, 1.2), v(-0.8, 0.8);
    Vec z(g);
    for (int i = 0; i < g; ++i) z(i) = cplx(u(rng), v(rng));
    return z;
}

// Independent naive box-sum oracle (no ellipsoid logic, no factoring).
cplx theta_brute(const Vec& z, const Mat& Pi, const Characteristics& ch, int R) {
    const int g = (int)Pi.rows();
    REQUIRE(g == 2);
    cplx s = 0.0;
    for (int n1 = -R; n1 <= R; ++n1)
        for (int n2 = -R; n2 <= R; ++n2) {
            Vec nd(2);
            nd << cplx(n1), cplx(n2);
            nd += ch.delta;
            cplx E = cplx(0, PI) * (nd.transpose() * (Pi * nd))(0) +
                     TWO_PI_I * ((z + ch.eps).transpose() * nd)(0);
            s += std::exp(E);
        }
    return s;
}

}  // namespace

TEST_CASE("theta(0; i I_2) equals the squared one-dimensional Gaussian sum") {
    ThetaParams par{Mat::Identity(2, 2) * cplx(0, 1), 1e-13};
    cplx got = theta(Vec::Zero(2), par);
    double g1 = 0.0;
    for (int n = -30; n <= 30; ++n) g1 += std::exp(-PI * n * n);
    CHECK(std::abs(got - g1 * g1) < 1e-12);
    CHECK(got.real() == doctest::Approx(1.1803405990).epsilon(1e-9));
    CHECK(std::abs(got.imag()) < 1e-13);
}

TEST_CASE("theta matches a naive box sum at random complex arguments") {
    ThetaParams par{pi2(), 1e-12};
    std::mt19937 rng(11);
    Characteristics zero;
    for (int t = 0; t < 6; ++t) {
        Characteristics ch = (t % 2 == 0) ? rand_chars(2, rng) : zero;
        Vec z = rand_z(2, rng);
        cplx got = theta(z, par, ch);
        cplx want = theta_brute(z, par.Pi, ch.eps.size() ? ch : Characteristics{Vec::Zero(2), Vec::Zero(2), ""}, 30);
        CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("periodicity in the integer directions") {
    ThetaParams par{pi2(), 1e-12};
    std::mt19937 rng(7);
    for (int t = 0; t < 4; ++t) {
        auto ch = rand_chars(2, rng);
        Vec z = rand_z(2, rng);
        cplx base = theta(z, par, ch);
        for (int k = 0; k < 2; ++k) {
            Vec zk = z;
            zk(k) += 1.0;
            cplx want = std::exp(TWO_PI_I * ch.delta(k)) * base;
            CHECK(std::abs(theta(zk, par, ch) - want) < 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("quasi-periodicity in the Pi directions") {
    ThetaParams par{pi2(), 1e-12};
    std::mt19937 rng(13);
    for (int t = 0; t < 4; ++t) {
        auto ch = rand_chars(2, rng);
        Vec z = rand_z(2, rng);
        cplx base = theta(z, par, ch);
        for (int k = 0; k < 2; ++k) {
            Vec zk = z + par.Pi.col(k);
            cplx factor = std::exp(TWO_PI_I * ch.eps(k) + TWO_PI_I * z(k) + cplx(0, PI) * par.Pi(k, k));
            CHECK(std::abs(theta(zk, par, ch) * factor - base) < 1e-9 * std::abs(base));
        }
        // general lattice vector b: theta(z + Pi b) = exp(-i pi <Pi b, b> - 2 pi i <z+eps, b>) theta(z)
        Vec b(2);
        b << cplx(1.0), cplx(-1.0);
        Vec zb = z + par.Pi * b;
        cplx phase = std::exp(-cplx(0, PI) * (b.transpose() * (par.Pi * b))(0) -
                              TWO_PI_I * ((z + ch.eps).transpose() * b)(0));
        // the shifted value carries the growth factor |phase|, so the
        // achievable absolute accuracy scales with it
        CHECK(std::abs(theta(zb, par, ch) - phase * base) < 1e-9 * (1.0 + std::abs(phase)));
    }
}

TEST_CASE("integer shifts of the characteristics") {
    ThetaParams par{pi2(), 1e-12};
    std::mt19937 rng(17);
    for (int t = 0; t < 4; ++t) {
        auto ch = rand_chars(2, rng);
        Vec z = rand_z(2, rng);
        cplx base = theta(z, par, ch);
        Vec np(2), npp(2);
        np << cplx(1.0), cplx(-2.0);
        npp << cplx(-1.0), cplx(3.0);
        Characteristics sh{ch.eps + npp, ch.delta + np, ""};
        // shifting delta by integers is invisible; shifting eps by n''
        // contributes exp(2 pi i <n'', delta>)
        cplx phase = std::exp(TWO_PI_I * (npp.transpose() * ch.delta)(0));
        CHECK(std::abs(theta(z, par, sh) - phase * base) < 1e-10 * std::abs(base));
        Characteristics dshift{ch.eps, ch.delta + np, ""};
        CHECK(std::abs(theta(z, par, dshift) - base) < 1e-10 * std::abs(base));
    }
}

TEST_CASE("evenness and vanishing gradient at the origin") {
    ThetaParams par{pi2(), 1e-12};
    std::mt19937 rng(23);
    Characteristics zero;
    for (int t = 0; t < 4; ++t) {
        Vec z = rand_z(2, rng);
        CHECK(std::abs(theta(z, par) - theta((-z).eval(), par)) < 1e-11);
    }
    Vec gr = theta_gradient(Vec::Zero(2), par, zero);
    CHECK(gr.cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("gradient and Hessian match finite differences") {
    ThetaParams par{pi2(), 1e-13};
    std::mt19937 rng(29);
    auto ch = rand_chars(2, rng);
    Vec z = rand_z(2, rng);
    Vec gr = theta_gradient(z, par, ch);
    Mat he = theta_hessian(z, par, ch);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i) {
        Vec zp = z, zm = z;
        zp(i) += h;
        zm(i) -= h;
        cplx fd = (theta(zp, par, ch) - theta(zm, par, ch)) / (2 * h);
        CHECK(std::abs(fd - gr(i)) < 1e-8 * (1.0 + std::abs(gr(i))));
        Vec gp = theta_gradient(zp, par, ch), gm = theta_gradient(zm, par, ch);
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs((gp(j) - gm(j)) / (2 * h) - he(i, j)) < 1e-7 * (1.0 + std::abs(he(i, j))));
    }
    CHECK((he - he.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("heat equation against symmetric finite differences in Pi") {
    ThetaParams par{pi2(), 1e-13};
    std::mt19937 rng(31);
    auto ch = rand_chars(2, rng);
    Vec z = rand_z(2, rng);
    Mat he = theta_hessian(z, par, ch);
    const double h = 1e-5;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            ThetaParams pp = par, pm = par;
            pp.Pi(k, l) += h;
            pm.Pi(k, l) -= h;
            if (k != l) {  // keep Pi symmetric
                pp.Pi(l, k) += h;
                pm.Pi(l, k) -= h;
            }
            cplx fd = (theta(z, pp, ch) - theta(z, pm, ch)) / (2 * h);
            double kron = (k == l) ? 1.0 : 0.0;
            cplx want = TWO_PI_I * (1.0 + kron) * fd;
            CHECK(std::abs(he(k, l) - want) < 1e-8 * (1.0 + std::abs(want)));
        }
}

TEST_CASE("third-order tensor feeds consistent derivatives") {
    ThetaParams par{pi2(), 1e-13};
    std::mt19937 rng(37);
    auto ch = rand_chars(2, rng);
    Vec z = rand_z(2, rng);
    auto all = theta_derivatives(z, par, ch, 3);
    CHECK(std::abs(all.value - theta(z, par, ch)) < 1e-13 * std::abs(all.value));
    CHECK((all.grad - theta_gradient(z, par, ch)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((all.hess - theta_hessian(z, par, ch)).cwiseAbs().maxCoeff() < 1e-12);
    const double h = 1e-5;
    for (int k = 0; k < 2; ++k) {
        Vec zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        Mat fd = (theta_hessian(zp, par, ch) - theta_hessian(zm, par, ch)) / (2 * h);
        double scale = 1.0 + all.third[(size_t)k].cwiseAbs().maxCoeff();
        CHECK((fd - all.third[(size_t)k]).cwiseAbs().maxCoeff() < 1e-6 * scale);
    }
}

TEST_CASE("conditioning and validation errors") {
    Mat bad = Mat::Identity(2, 2) * cplx(0.0, 1e-9);
    CHECK_THROWS_AS(theta(Vec::Zero(2), ThetaParams{bad, 1e-12}), IllConditioned);
    Mat asym = pi2();
    asym(0, 1) += 0.1;
    CHECK_THROWS_AS(theta(Vec::Zero(2), ThetaParams{asym, 1e-12}), ConventionMismatch);
    CHECK_THROWS_AS(theta(Vec::Zero(3), ThetaParams{pi2(), 1e-12}), BadArity);
    CHECK_THROWS_AS(jacobi_theta(4, 0.0, cplx(0, 1)), BadArity);
    CHECK_THROWS_AS(jacobi_theta(3, 0.0, cplx(0.3, 1e-9)), IllConditioned);
}

TEST_CASE("Jacobi theta values and genus-1 agreement") {
    // theta3(0; i) = pi^{1/4} / Gamma(3/4)
    double want = std::pow(PI, 0.25) / std::tgamma(0.75);
    cplx t3 = jacobi_theta(3, 0.0, cplx(0, 1));
    CHECK(std::abs(t3 - want) < 1e-12);
    // theta2(0; tau) ~ 2 q^{1/4}, q = exp(i pi tau)
    for (double Y : {5.0, 10.0}) {
        cplx t2 = jacobi_theta(2, 0.0, cplx(0, Y));
        CHECK(std::abs(t2 - 2.0 * std::exp(-PI * Y / 4.0)) < 1e-14 + 1e-10 * std::abs(t2));
    }
    // genus-1 Riemann theta reproduces theta3 and theta2
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int t = 0; t < 5; ++t) {
        cplx tau(u(rng) * 0.4, 0.7 + 0.5 * std::abs(u(rng)));
        cplx zz(u(rng), 0.5 * u(rng));
        Mat P(1, 1);
        P(0, 0) = tau;
        ThetaParams par{P, 1e-13};
        Vec z(1);
        z(0) = zz;
        CHECK(std::abs(theta(z, par) - jacobi_theta(3, zz, tau)) < 1e-12);
        Characteristics half{Vec::Zero(1), Vec::Constant(1, cplx(0.5)), ""};
        CHECK(std::abs(theta(z, par, half) - jacobi_theta(2, zz, tau)) < 1e-12);
    }
    // square of the one-dimensional constant = genus-2 identity-matrix value
    ThetaParams pid{Mat::Identity(2, 2) * cplx(0, 1), 1e-13};
    CHECK(std::abs(theta(Vec::Zero(2), pid) - t3 * t3) < 1e-12);
}

TEST_CASE("theta vanishes on the divisor built from g-1 surface points") {
    auto C = make_curve(3, {-1.0, 0.2, 1.7});  // genus 2, so g-1 = 1 point
    auto ctx = make_abel(C);
    ThetaParams par{ctx.P.Pi, 1e-12};
    cplx t0 = theta(Vec::Zero(C.g), par);
    Vec K = riemann_constants(ctx);
    struct Pt {
        cplx l;
        int sheet;
    };
    for (Pt pt : {Pt{cplx(0.9, 0.8), 1}, Pt{cplx(-0.4, -1.1), 2}, Pt{cplx(2.6, 0.5), 3},
                  Pt{cplx(-2.0, 0.3), 2}, Pt{cplx(0.6, -0.7), 1}}) {
        Vec e = abel_v(ctx, pt.l, pt.sheet) - K;
        CHECK(std::abs(theta(e, par)) < 1e-7 * std::abs(t0));
    }
}
