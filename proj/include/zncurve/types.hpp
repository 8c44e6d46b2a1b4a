#pragma once

// Shared scalar/linear-algebra typedefs and the error taxonomy used across the
// library. All numerical routines work in double precision; accuracy contracts
// are stated per operation and enforced by the test suite.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zn {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double PI = 3.141592653589793238462643383279502884;
inline const cplx I{0.0, 1.0};
inline const cplx TWO_PI_I{0.0, 2.0 * PI};

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};
struct AmbiguousMatching : Error {
    explicit AmbiguousMatching(const std::string& msg) : Error(msg) {}
};
struct DuplicatePoints : Error {
    explicit DuplicatePoints(const std::string& msg) : Error(msg) {}
};
struct BadArity : Error {
    explicit BadArity(const std::string& msg) : Error(msg) {}
};
struct OnBranchPoint : Error {
    explicit OnBranchPoint(const std::string& msg) : Error(msg) {}
};
struct CutAmbiguity : Error {
    explicit CutAmbiguity(const std::string& msg) : Error(msg) {}
};
struct SingularNormalization : Error {
    explicit SingularNormalization(const std::string& msg) : Error(msg) {}
};
struct PathThroughBranchPoint : Error {
    explicit PathThroughBranchPoint(const std::string& msg) : Error(msg) {}
};
struct ConventionMismatch : Error {
    explicit ConventionMismatch(const std::string& msg) : Error(msg) {}
};
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};
struct NoneFound : Error {
    explicit NoneFound(const std::string& msg) : Error(msg) {}
};
struct DegenerateH : Error {
    explicit DegenerateH(const std::string& msg) : Error(msg) {}
};
struct SingularCharacteristics : Error {
    explicit SingularCharacteristics(const std::string& msg) : Error(msg) {}
};
struct OnCut : Error {
    explicit OnCut(const std::string& msg) : Error(msg) {}
};
struct StepUnderflow : Error {
    explicit StepUnderflow(const std::string& msg) : Error(msg) {}
};
struct ZeroConstant : Error {
    explicit ZeroConstant(const std::string& msg) : Error(msg) {}
};
struct SolvabilityViolation : Error {
    explicit SolvabilityViolation(const std::string& msg) : Error(msg) {}
};
struct ThetaDenominatorZero : Error {
    explicit ThetaDenominatorZero(const std::string& msg) : Error(msg) {}
};
struct BranchSelection : Error {
    explicit BranchSelection(const std::string& msg) : Error(msg) {}
};

// A point of the Jacobian written as eps + Pi delta. Entries may be complex
// (logarithms of the jump constants produce complex characteristics); stored
// unreduced so that periodicity phases remain meaningful.
struct Characteristics {
    Vec eps, delta;
    std::string provenance;
};

}  // namespace zn
