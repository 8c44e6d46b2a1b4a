#include "zncurve/periods.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace zn {

namespace {

// du over the segment a->b at parameter (t, 1-t), with branch-point indices
// bpa/bpb (1-based, 0 = none) at the endpoints handled cancellation-free.
Vec du_at(const ZnCurve& C, cplx a, cplx b, double t, double omt, int bpa, int bpb,
          int forced_cut, Side side) {
    const cplx d_ab = b - a;
    const cplx l = a + t * d_ab;
    std::vector<cplx> d(2 * C.m + 1);
    for (int k = 1; k <= 2 * C.m + 1; ++k) {
        if (k == bpa)
            d[k - 1] = t * d_ab;
        else if (k == bpb)
            d[k - 1] = -omt * d_ab;
        else
            d[k - 1] = l - C.lam(k);
    }
    cplx root = y1_root_from_diffs(C, d, forced_cut, side);
    cplx qv = 1.0;
    for (int k = 2; k <= 2 * C.m; k += 2) qv *= d[k - 1];
    return du_all_factored(C, l, root, qv);
}

double worst_exponent(const ZnCurve& C) { return -double(C.N - 1) / C.N; }

}  // namespace

Vec sheet_rotation(const ZnCurve& C, int sheet) {
    Vec D(C.g);
    for (int s = 0; s <= C.N - 2; ++s) {
        cplx f = std::pow(C.rho, -(sheet - 1) * (s + 1));
        for (int j = 0; j < C.m; ++j) D(j + s * C.m) = f;
    }
    return D;
}

Vec integrate_du(const ZnCurve& C, cplx a, cplx b, int offset, int forced_cut, Side side,
                 const QuadratureSpec& spec) {
    const int bpa = find_branch_point(C, a);
    const int bpb = find_branch_point(C, b);
    QuadratureSpec s = spec;
    s.endpoint_exponents = {bpa ? worst_exponent(C) : 0.0, bpb ? worst_exponent(C) : 0.0};
    Vec I = integrate_segment_vec(
        [&](double t, double omt) { return du_at(C, a, b, t, omt, bpa, bpb, forced_cut, side); },
        a, b, C.g, s);
    if (offset % C.N != 0) I = I.cwiseProduct(sheet_rotation(C, offset + 1));
    return I;
}

Mat segment_integrals_C(const ZnCurve& C, const QuadratureSpec& spec) {
    Mat M(C.g, C.m);
    for (int j = 1; j <= C.m; ++j)
        M.col(j - 1) = integrate_du(C, C.lam(2 * j - 1), C.lam(2 * j), 0, j - 1, Side::plus, spec);
    return M;
}

Mat segment_integrals_G(const ZnCurve& C, const QuadratureSpec& spec) {
    Mat M(C.g, C.m);
    for (int j = 1; j <= C.m; ++j)
        M.col(j - 1) = integrate_du(C, C.lam(2 * j + 1), C.lam(2 * j), 0, -1, Side::automatic, spec);
    return M;
}

void assemble_periods(const ZnCurve& C, PeriodData& P) {
    const int g = C.g, m = C.m, N = C.N;
    P.N = N;
    P.m = m;
    P.g = g;
    P.A.resize(g, g);
    P.B.resize(g, g);
    // cumulative cut integrals: Ccum(:, j-1) = sum_{l<=j} C(:, l-1)
    Mat Ccum = P.C;
    for (int j = 1; j < m; ++j) Ccum.col(j) += Ccum.col(j - 1);
    for (int col = 0; col < g; ++col) {
        const int k = col / m;  // sheet block of the cycle
        const int j = col % m;  // cut / gap number - 1
        for (int i = 0; i < g; ++i) {
            const int s = i / m;  // block of the differential
            cplx ka = std::pow(C.rho, -k * (s + 1)) * (std::pow(C.rho, -(s + 1)) - 1.0);
            cplx kb = std::pow(C.rho, -k * (s + 1)) - std::pow(C.rho, -(N - 1) * (s + 1));
            P.A(i, col) = ka * Ccum(i, j);
            P.B(i, col) = kb * P.G(i, j);
        }
    }
    Eigen::FullPivLU<Mat> lu(P.A);
    if (!lu.isInvertible())
        throw SingularNormalization("assemble_periods: singular alpha-period matrix");
    P.Ainv = lu.inverse();
    P.Pi = P.Ainv * P.B;
    // structural blocks: A_blocks[s](k,j) = oint_{alpha_{j+1}} du_{k+1+sm}
    P.A_blocks.assign(N - 1, Mat(m, m));
    P.B_blocks.assign(N - 1, Mat(m, m));
    for (int s = 0; s < N - 1; ++s)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j) {
                P.A_blocks[s](k, j) = P.A(k + s * m, j);
                P.B_blocks[s](k, j) = P.B(k + s * m, j);
            }
    P.R_A = Mat::Zero(g, g);
    P.R_B = Mat::Zero(g, g);
    for (int i = 1; i <= N - 1; ++i)
        for (int k = 1; k <= N - 1; ++k) {
            cplx ra = (std::pow(C.rho, -i * (k - 1)) - std::pow(C.rho, -i * k)) /
                      (1.0 - std::pow(C.rho, -i));
            cplx rb = (std::pow(C.rho, -i * (k - 1)) - std::pow(C.rho, -i * (N - 1))) /
                      (1.0 - std::pow(C.rho, -(N - 1) * i));
            for (int l = 0; l < m; ++l) {
                P.R_A((i - 1) * m + l, (k - 1) * m + l) = ra;
                P.R_B((i - 1) * m + l, (k - 1) * m + l) = rb;
            }
        }
}

PeriodData period_matrix(const ZnCurve& C, const PeriodOptions& opt) {
    PeriodData P;
    P.C = segment_integrals_C(C, opt.quad);
    P.G = segment_integrals_G(C, opt.quad);
    assemble_periods(C, P);
    // invariants of the normalized matrix
    double sc = P.Pi.cwiseAbs().maxCoeff();
    if ((P.Pi - P.Pi.transpose()).cwiseAbs().maxCoeff() > 1e-8 * sc)
        throw ConventionMismatch("period_matrix: Pi is not symmetric");
    RMat Y = P.Pi.imag();
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (Y + Y.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw ConventionMismatch("period_matrix: Im Pi is not positive definite");
    return P;
}

Vec cycle_period_direct(const ZnCurve& C, const CyclePath& cp, const QuadratureSpec& spec) {
    Vec I = Vec::Zero(C.g);
    for (const auto& seg : cp.segments)
        I += integrate_du(C, seg.a, seg.b, seg.sheet - 1, -1, Side::automatic, spec);
    return I;
}

ContinuedIntegral integrate_du_along(const ZnCurve& C, const std::vector<cplx>& verts,
                                     int offset0, const QuadratureSpec& spec) {
    if (verts.size() < 2) throw DomainError("integrate_du_along: need at least two vertices");
    ContinuedIntegral out;
    out.integral = Vec::Zero(C.g);
    out.offset = offset0;
    const double sc = C.scale();
    for (size_t v = 0; v + 1 < verts.size(); ++v) {
        cplx a = verts[v], b = verts[v + 1];
        // collect crossing parameters with all cuts (segments and the ray)
        std::vector<double> ts{0.0, 1.0};
        cplx d1 = b - a;
        for (int c = 0; c <= C.m; ++c) {
            auto [p, q] = C.cut_endpoints(c);
            cplx d2 = q - p;
            double den = d1.real() * d2.imag() - d1.imag() * d2.real();
            if (std::abs(den) < 1e-14 * std::abs(d1) * std::abs(d2)) continue;
            double t = ((p - a).real() * d2.imag() - (p - a).imag() * d2.real()) / den;
            double u = ((p - a).real() * d1.imag() - (p - a).imag() * d1.real()) / den;
            if (t > 1e-12 && t < 1.0 - 1e-12 && u > -1e-12 && u < 1.0 + 1e-12) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        for (size_t i = 0; i + 1 < ts.size(); ++i) {
            double t0 = ts[i], t1 = ts[i + 1];
            if (t1 - t0 < 1e-14) continue;
            cplx pa = a + t0 * d1, pb = a + t1 * d1;
            out.integral +=
                integrate_du(C, pa, pb, out.offset, -1, Side::automatic, spec);
            if (i + 2 < ts.size()) {
                // branch bookkeeping across the crossing at t1: match the
                // continued root by its phase jump relative to y1
                double eps = std::min({1e-6 * sc / std::abs(d1), 0.45 * (t1 - t0),
                                       0.45 * (ts[i + 2] - t1)});
                cplx pre = a + (t1 - eps) * d1, post = a + (t1 + eps) * d1;
                cplx ratio = y_value(C, pre, 1) / y_value(C, post, 1);
                int dphase = (int)std::lround(C.N * std::arg(ratio) / (2.0 * PI));
                out.offset += dphase;
            }
        }
    }
    return out;
}

AbelContext make_abel(const ZnCurve& C, const PeriodOptions& opt) {
    AbelContext ctx;
    ctx.C = &C;
    ctx.quad = opt.quad;
    ctx.P = period_matrix(C, opt);
    double xlo = C.lam(1).real(), xhi = C.lam(1).real(), ymax = std::abs(C.lam(1).imag());
    for (int k = 2; k <= 2 * C.m + 1; ++k) {
        xlo = std::min(xlo, C.lam(k).real());
        xhi = std::max(xhi, C.lam(k).real());
        ymax = std::max(ymax, std::abs(C.lam(k).imag()));
    }
    ctx.H = 2.0 * (xhi - xlo) + 4.0 * ymax + 2.0;
    double xc = 0.5 * (xlo + xhi);
    ctx.anchor_top = cplx(xc, ctx.H);
    ctx.x_left = cplx(xlo - 0.5 * (xhi - xlo) - 2.0, 0.0);
    ctx.anchor_bottom = cplx(ctx.x_left.real(), -ctx.H);

    // tail from infinity: lambda(t) = xc + iH/t = mu/t with mu = t*xc + iH.
    // All factors are kept moderate by pulling the powers of t out
    // analytically: du_{j+sm} dlambda/dt = -iH t^e mu^{j-1} / (qt * w^{s+1}),
    // qt = prod_even (mu - t lam_k), w = e^{i pi/N} * prod_cuts ratio^{1/N} *
    // (t lam_{2m+1} - mu)^{1/N}, e = (m - j - 1) + (s+1)/N.
    QuadratureSpec s = ctx.quad;
    s.endpoint_exponents = {-double(C.N - 1) / C.N, 0.0};
    const double H = ctx.H;
    ctx.tail_top = integrate_segment_vec(
        [&C, xc, H](double t, double) {
            cplx mu(t * xc, H);
            cplx qt = 1.0;
            for (int k = 2; k <= 2 * C.m; k += 2) qt *= (mu - t * C.lam(k));
            cplx w = std::exp(cplx(0.0, PI / C.N));
            for (int c = 0; c < C.m; ++c)
                w *= std::pow((mu - t * C.lam(2 * c + 1)) / (mu - t * C.lam(2 * c + 2)),
                              1.0 / C.N);
            w *= std::pow(t * C.lam(2 * C.m + 1) - mu, 1.0 / C.N);
            Vec v(C.g);
            const cplx inv_w = 1.0 / w;
            cplx ws1 = inv_w;  // w^{-(s+1)}
            for (int sblk = 0; sblk <= C.N - 2; ++sblk) {
                for (int j = 1; j <= C.m; ++j) {
                    double e = double(C.m - j - 1) + double(sblk + 1) / C.N;
                    v((j - 1) + sblk * C.m) = cplx(0.0, -H) * std::pow(t, e) *
                                              std::pow(mu, j - 1) / qt * ws1;
                }
                ws1 *= inv_w;
            }
            return v;
        },
        0.0, 1.0, C.g, s);

    // around the left: anchor_top -> (x_left, H) -> anchor_bottom; crosses no cut
    Vec left = integrate_du(C, ctx.anchor_top, cplx(ctx.x_left.real(), ctx.H), 0, -1,
                            Side::automatic, ctx.quad);
    left += integrate_du(C, cplx(ctx.x_left.real(), ctx.H), ctx.anchor_bottom, 0, -1,
                         Side::automatic, ctx.quad);
    ctx.tail_bottom = ctx.tail_top + left;
    return ctx;
}

Vec abel_du(const AbelContext& ctx, cplx lambda, bool from_above) {
    const ZnCurve& C = *ctx.C;
    // strictly interior targets are routed through their own half plane so the
    // final descent never crosses a cut; the flag decides on-axis approaches
    const double tol = 1e-12 * C.scale();
    bool use_top = (lambda.imag() > tol) ? true
                   : (lambda.imag() < -tol) ? false
                                            : from_above;
    Vec I;
    if (use_top) {
        cplx knee(lambda.real(), ctx.H);
        I = ctx.tail_top + integrate_du(C, ctx.anchor_top, knee, 0, -1, Side::automatic, ctx.quad);
        I += integrate_du(C, knee, lambda, 0, -1, Side::automatic, ctx.quad);
    } else {
        cplx knee(lambda.real(), -ctx.H);
        I = ctx.tail_bottom +
            integrate_du(C, ctx.anchor_bottom, knee, 0, -1, Side::automatic, ctx.quad);
        I += integrate_du(C, knee, lambda, 0, -1, Side::automatic, ctx.quad);
    }
    return I;
}

Vec abel_v(const AbelContext& ctx, cplx lambda, int sheet, bool from_above) {
    Vec I = abel_du(ctx, lambda, from_above);
    if (sheet != 1) I = I.cwiseProduct(sheet_rotation(*ctx.C, sheet));
    return ctx.P.Ainv * I;
}

Vec abel_map(const ZnCurve& C, const PeriodData& P, const SheetedPoint& from,
             const SheetedPoint& to, const PathSpec& path, const QuadratureSpec& spec) {
    if (path.vertices.size() < 2) throw DomainError("abel_map: need at least two vertices");
    const double tol = 1e-9 * C.scale();
    if (std::abs(path.vertices.front() - from.lambda) > tol ||
        std::abs(path.vertices.back() - to.lambda) > tol)
        throw DomainError("abel_map: path endpoints do not match the given points");
    // branch points are allowed only as declared endpoints
    const double clear = std::max(path.min_clearance, 1e-8 * C.scale());
    for (size_t v = 0; v + 1 < path.vertices.size(); ++v) {
        cplx a = path.vertices[v], b = path.vertices[v + 1];
        for (int k = 1; k <= 2 * C.m + 1; ++k) {
            cplx l = C.lam(k);
            cplx d = b - a;
            double t = std::clamp(((l - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
            double dist = std::abs(l - (a + t * d));
            bool at_start = (v == 0 && std::abs(l - a) <= tol);
            bool at_end = (v + 2 == path.vertices.size() && std::abs(l - b) <= tol);
            if (dist < clear && !at_start && !at_end)
                throw PathThroughBranchPoint("abel_map: path passes through a branch point");
        }
    }
    auto r = integrate_du_along(C, path.vertices, from.sheet - 1, spec);
    return P.Ainv * r.integral;
}

std::pair<RVec, RVec> lattice_coordinates(const Mat& Pi, const Vec& U) {
    RMat Y = Pi.imag();
    RVec b = Y.fullPivLu().solve(U.imag());
    RVec a = U.real() - Pi.real() * b;
    return {a, b};
}

double lattice_distance(const Mat& Pi, const Vec& U) {
    auto [a, b] = lattice_coordinates(Pi, U);
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a(i) - std::round(a(i))));
        d = std::max(d, std::abs(b(i) - std::round(b(i))));
    }
    if (!std::isfinite(d)) throw NonConvergence("lattice_distance: non-finite input");
    return d;
}

Vec riemann_constants(const AbelContext& ctx) {
    const ZnCurve& C = *ctx.C;
    Vec K = Vec::Zero(C.g);
    for (int k = 1; k <= C.m; ++k) K += ctx.P.Ainv * abel_du(ctx, C.lam(2 * k));
    return double(C.N - 1) * K;
}

namespace {

Characteristics branch_char_table(const ZnCurve& C, int kappa) {
    Characteristics ch;
    ch.eps = Vec::Zero(C.g);
    ch.delta = Vec::Zero(C.g);
    ch.provenance = "from-divisor";
    const double invN = 1.0 / C.N;
    const int half = kappa / 2;  // for kappa = 2k -> k; for 2k+1 -> k
    for (int s = 0; s <= C.N - 2; ++s) {
        for (int j = 1; j <= C.m; ++j) {
            bool neg = (kappa % 2 == 0) ? (j >= half) : (j > half);
            if (neg) ch.delta((j - 1) + s * C.m) = -invN;
        }
        if (half >= 1) ch.eps((half - 1) + s * C.m) = (s + 1) * invN;
    }
    return ch;
}

}  // namespace

std::vector<Characteristics> branch_characteristics(const AbelContext& ctx) {
    const ZnCurve& C = *ctx.C;
    std::vector<Characteristics> table;
    for (int kappa = 1; kappa <= 2 * C.m + 1; ++kappa) {
        Characteristics ch = branch_char_table(C, kappa);
        Vec Unum = ctx.P.Ainv * abel_du(ctx, C.lam(kappa));
        Vec rep = ch.eps + ctx.P.Pi * ch.delta;
        if (!(lattice_distance(ctx.P.Pi, Unum - rep) <= 1e-8))
            throw ConventionMismatch(
                "branch_characteristics: table entry disagrees with Abel quadrature");
        table.push_back(std::move(ch));
    }
    return table;
}

Characteristics divisor_characteristics(const AbelContext& ctx, const BranchDivisor& D,
                                        bool subtract_delta) {
    const ZnCurve& C = *ctx.C;
    Characteristics out;
    out.eps = Vec::Zero(C.g);
    out.delta = Vec::Zero(C.g);
    out.provenance = "from-divisor";
    for (auto [kappa, w] : D.weights) {
        if (kappa < 1 || kappa > 2 * C.m + 1)
            throw DomainError("divisor_characteristics: branch index out of range");
        Characteristics ch = branch_char_table(C, kappa);
        out.eps += double(w) * ch.eps;
        out.delta += double(w) * ch.delta;
    }
    if (subtract_delta) {
        for (int k = 1; k <= C.m; ++k) {
            Characteristics ch = branch_char_table(C, 2 * k);
            out.eps -= double(C.N - 1) * ch.eps;
            out.delta -= double(C.N - 1) * ch.delta;
        }
    }
    auto reduce = [](Vec& v) {
        for (int i = 0; i < v.size(); ++i) {
            double x = v(i).real();
            v(i) = x - 2.0 * std::floor((x + 1.0) / 2.0);
        }
    };
    reduce(out.eps);
    reduce(out.delta);
    return out;
}

Mat rauch_derivative(const ZnCurve& C, const PeriodData& P, int i) {
    if (i < 1 || i > 2 * C.m + 1) throw DomainError("rauch_derivative: branch index out of range");
    const cplx li = C.lam(i);
    const int w = (i % 2 == 1) ? 1 : C.N - 1;  // vanishing order of y at lam(i)
    double dmin = 1e300;
    for (int k = 1; k <= 2 * C.m + 1; ++k)
        if (k != i) dmin = std::min(dmin, std::abs(C.lam(k) - li));
    const double rz = std::pow(0.25 * dmin, 1.0 / C.N);
    // reference N-th root of R(lambda) = p q^{N-1} / (lambda - lambda_i)^w at
    // the center; the branch is continued by principal ratios on the disc
    auto R_of = [&](cplx l) {
        cplx v = 1.0;
        for (int k = 1; k <= 2 * C.m + 1; ++k) {
            if (k == i) continue;
            cplx f = l - C.lam(k);
            v *= (k % 2 == 1) ? f : std::pow(f, C.N - 1);
        }
        return v;
    };
    const cplx R0 = R_of(li);
    const cplx root0 = std::pow(R0, 1.0 / C.N);
    Mat prev;
    for (int M = 64; M <= 4096; M *= 2) {
        Mat acc = Mat::Zero(C.g, C.g);
        for (int t = 0; t < M; ++t) {
            cplx z = rz * std::exp(cplx(0.0, 2.0 * PI * t / M));
            cplx zN = std::pow(z, C.N);
            cplx l = li + zN;
            cplx y = std::pow(z, w) * root0 * std::pow(R_of(l) / R0, 1.0 / C.N);
            Vec dv = P.Ainv * du_all(C, l, y, C.q(l));
            // residue of dv_j dv_k / dlambda: integrand (dv/dl)(dv/dl) dl/dz,
            // contour factor z from dz = iz dtheta
            acc += (dv * dv.transpose()) * (double(C.N) * zN);
        }
        acc /= double(M);
        acc *= 2.0 * PI * cplx(0.0, 1.0);  // dPi = 2 pi i Res (FD-calibrated)
        if (prev.size() && (acc - prev).cwiseAbs().maxCoeff() <
                               1e-11 * std::max(1.0, acc.cwiseAbs().maxCoeff()))
            return acc;
        prev = acc;
    }
    return prev;
}

}  // namespace zn
