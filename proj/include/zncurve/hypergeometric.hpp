#pragma once

// Gauss hypergeometric function 2F1(a,b;c;z) for complex parameters and
// argument, off the cut [1, inf).
//
// Strategy: the Maclaurin series inside |z| <= 0.6; elsewhere analytic
// continuation by high-order Taylor stepping of the hypergeometric ODE
//   z(1-z) F'' + (c - (a+b+1)z) F' - ab F = 0
// along a polyline from 0 to z that keeps clear of the singular point 1.
// This avoids the classical connection formulas entirely, which is what makes
// the logarithmic cases (c - a - b integer, relevant here since the library
// mostly needs F(1/3, 2/3; 1; .)) and the points z ~ e^{+-i pi/3} where those
// formulas degenerate, unproblematic.

#include "zncurve/types.hpp"

namespace zn {

cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z);

}  // namespace zn
