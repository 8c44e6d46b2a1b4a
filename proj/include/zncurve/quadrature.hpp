#pragma once

// Tanh-sinh (double-exponential) quadrature over complex straight segments.
//
// The change of variable t = (1 + tanh((pi/2) sinh(u)))/2 pushes the endpoints
// to u = -+inf at double-exponential speed, so algebraic endpoint singularities
// (t-a)^alpha (b-t)^beta with alpha, beta > -1 are integrated with spectral
// accuracy without per-exponent node tables. Integrands receive both t and
// 1-t computed without cancellation, which matters when the singular factor
// must be evaluated at distances ~1e-200 from an endpoint.

#include <functional>
#include <utility>

#include "zncurve/types.hpp"

namespace zn {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_subdivisions = 12;  // number of dyadic refinement levels
    // Declared integrand behavior (t)^alpha (1-t)^beta near the endpoints,
    // each exponent in (-1, 0]. Informational: tanh-sinh needs no per-exponent
    // setup, but the declaration is validated so misuse fails loudly.
    std::pair<double, double> endpoint_exponents{0.0, 0.0};

    void validate() const {
        if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
        if (!(endpoint_exponents.first > -1.0 && endpoint_exponents.second > -1.0))
            throw DomainError("QuadratureSpec: endpoint exponents must be > -1");
        if (max_subdivisions < 2 || max_subdivisions > 15)
            throw DomainError("QuadratureSpec: max_subdivisions out of range [2,15]");
    }
};

// Integral over the straight segment a -> b of g(lambda) dlambda, where the
// integrand callback is given the segment parameter t in (0,1) and its
// complement 1-t (so lambda = a + t*(b-a)). The (b-a) path factor is included.
cplx integrate_segment(const std::function<cplx(double, double)>& integrand, cplx a, cplx b,
                       const QuadratureSpec& spec = {});

// Same transform for vector-valued integrands (one pass shared across
// components; convergence measured in the max norm).
Vec integrate_segment_vec(const std::function<Vec(double, double)>& integrand, cplx a, cplx b,
                          int dim, const QuadratureSpec& spec = {});

}  // namespace zn
