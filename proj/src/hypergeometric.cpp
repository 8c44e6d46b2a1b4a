#include "zncurve/hypergeometric.hpp"

#include <cmath>
#include <vector>

namespace zn {
namespace {

bool is_nonpositive_integer(cplx v) {
    double re = v.real();
    return std::abs(v.imag()) < 1e-14 && re <= 1e-14 && std::abs(re - std::round(re)) < 1e-12;
}

// Maclaurin series; valid (and fast) for |z| <= ~0.6. Also returns F'.
void series_at_origin(cplx a, cplx b, cplx c, cplx z, cplx& F, cplx& dF) {
    cplx term = 1.0, sum = 1.0, dsum = 0.0;
    for (int n = 0; n < 700; ++n) {
        cplx dterm = term * (a + (double)n) * (b + (double)n) / (c + (double)n) / (double)(n + 1);
        dsum += dterm * (double)(n + 1);  // coefficient of z^n in F' times z^n... see below
        term = dterm * z;
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && n > 4) break;
        if (n == 699) throw NonConvergence("gauss_2f1: series did not converge");
    }
    // dsum accumulated sum_{n>=0} (n+1) c_{n+1} z^n where c_k are series coeffs:
    // that is exactly F'(z).
    F = sum;
    dF = dsum;
}

// One Taylor step of the ODE from t0 (where F, dF are known) to t0 + u.
void taylor_step(cplx a, cplx b, cplx c, cplx t0, cplx u, cplx& F, cplx& dF) {
    const cplx A0 = t0 * (1.0 - t0);
    const cplx A1 = 1.0 - 2.0 * t0;
    const cplx B0 = c - (a + b + 1.0) * t0;
    // f_{n+2} = [ (n+a)(n+b) f_n - (n+1)(n A1 + B0) f_{n+1} ] / (A0 (n+2)(n+1))
    std::vector<cplx> f(2);
    f[0] = F;
    f[1] = dF;
    cplx val = f[0] + f[1] * u;
    cplx dval = f[1];
    cplx upow = u;
    for (int n = 0;; ++n) {
        cplx fn2 = ((a + (double)n) * (b + (double)n) * f[f.size() - 2] -
                    ((double)n * A1 + B0) * (double)(n + 1) * f.back()) /
                   (A0 * (double)((n + 2) * (n + 1)));
        f.push_back(fn2);
        dval += fn2 * (double)(n + 2) * upow;
        upow *= u;
        val += fn2 * upow;
        if (n > 8 && std::abs(fn2 * upow) < 1e-18 * (1.0 + std::abs(val)) &&
            std::abs(f[f.size() - 2] * upow / u) < 1e-18 * (1.0 + std::abs(val)))
            break;
        if (n > 400) throw NonConvergence("gauss_2f1: Taylor step did not converge");
    }
    F = val;
    dF = dval;
}

// Continue (F, F') along the straight segment from t0 to t1 with steps that
// stay well inside the disc of analyticity around each expansion point.
void continue_along(cplx a, cplx b, cplx c, cplx t0, cplx t1, cplx& F, cplx& dF) {
    cplx cur = t0;
    int guard = 0;
    while (true) {
        cplx rem = t1 - cur;
        double dist = std::min(std::abs(cur), std::abs(cur - 1.0));
        double step = 0.38 * dist;
        if (std::abs(rem) <= step) {
            taylor_step(a, b, c, cur, rem, F, dF);
            return;
        }
        cplx u = rem / std::abs(rem) * step;
        taylor_step(a, b, c, cur, u, F, dF);
        cur += u;
        if (++guard > 300) throw NonConvergence("gauss_2f1: continuation stalled");
    }
}

}  // namespace

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z) {
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
    if (std::abs(z.imag()) < 1e-15 && z.real() >= 1.0)
        throw DomainError("gauss_2f1: z on the branch cut [1, inf)");
    if (std::abs(z) <= 0.6) {
        cplx F, dF;
        series_at_origin(a, b, c, z, F, dF);
        return F;
    }
    // Start from a point on the ray towards z (or its reflection if that ray
    // grazes 1), then walk the remaining polyline by ODE Taylor steps.
    cplx dir = z / std::abs(z);
    cplx start = 0.55 * dir;
    cplx F, dF;
    series_at_origin(a, b, c, start, F, dF);
    // Does the segment start -> z pass near 1? Distance from 1 to the segment.
    auto seg_dist = [](cplx p, cplx s, cplx e) {
        cplx d = e - s;
        double L2 = std::norm(d);
        double t = L2 > 0 ? std::clamp(((p - s) * std::conj(d)).real() / L2, 0.0, 1.0) : 0.0;
        return std::abs(p - (s + t * d));
    };
    double margin = seg_dist(cplx(1.0), start, z);
    double zdist = std::abs(z - 1.0);
    if (margin < 0.2 && margin < 0.9 * zdist) {
        // Detour around 1 on the side of Im z (above for real z < 1 is moot
        // since then the segment cannot graze 1 closer than the endpoint).
        double side = (z.imag() >= 0.0) ? 1.0 : -1.0;
        cplx way = cplx(1.0, 0.45 * side);
        continue_along(a, b, c, start, way, F, dF);
        continue_along(a, b, c, way, z, F, dF);
    } else {
        continue_along(a, b, c, start, z, F, dF);
    }
    return F;
}

}  // namespace zn
