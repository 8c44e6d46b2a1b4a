#include "zncurve/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace zn {
namespace {

struct Node {
    double t;    // abscissa in (0, 1/2], mirrored for the right half
    double omt;  // 1 - t, exact complement
    double w;    // weight (already includes the du spacing factor h=1 scaling out)
};

// Nodes for |u| = k*h at level l use h = 2^-l; level 0 holds k = 0,1,2,...,
// level l >= 1 only the odd multiples of its h (the new points of the
// refinement). Nodes are stored for u > 0 only; u = 0 is handled separately.
struct LevelTable {
    std::vector<Node> nodes;  // weight excludes the factor h
};

constexpr double U_MAX = 6.0;

Node make_node(double u) {
    // s = (pi/2) sinh u;  t = 1/(1+e^{-2s}), 1-t = 1/(1+e^{2s})
    // dt/du = (pi/4) cosh u / cosh^2 s
    const double s = 0.5 * PI * std::sinh(u);
    const double e2s = std::exp(-2.0 * std::abs(s));
    double tpos = 1.0 / (1.0 + e2s);        // value at +|s|
    double tneg = e2s / (1.0 + e2s);        // value at -|s| (== complement)
    double t = (s >= 0) ? tpos : tneg;
    double omt = (s >= 0) ? tneg : tpos;
    // cosh^2 s = (e^s + e^-s)^2/4 = e^{2|s|} (1 + e^{-2|s|})^2 / 4
    // w = (pi/4) cosh u / cosh^2 s = pi cosh u e^{-2|s|} / (1+e^{-2|s|})^2
    const double w = PI * std::cosh(u) * e2s / ((1.0 + e2s) * (1.0 + e2s));
    return Node{t, omt, w};
}

const LevelTable& level_table(int level) {
    static std::vector<LevelTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if ((int)cache.size() <= level) cache.resize(level + 1);
    LevelTable& tab = cache[level];
    if (!tab.nodes.empty()) return tab;
    const double h = std::ldexp(1.0, -level);
    const int kstep = (level == 0) ? 1 : 2;
    const int kfirst = 1;
    for (int k = kfirst; k * h <= U_MAX; k += kstep) {
        Node n = make_node(k * h);
        // margin against under/overflow in endpoint-singular integrands
        if (n.w < 1e-280) break;
        tab.nodes.push_back(n);
    }
    return tab;
}

template <typename Value, typename Eval, typename Norm, typename Zero>
Value tanh_sinh_unit(const Eval& f, const Norm& norm, const Zero& zero, const QuadratureSpec& spec,
                     const char* what) {
    // integral over t in (0,1) of f(t, 1-t) dt
    Value center = f(0.5, 0.5);
    Value sum = center * make_node(0.0).w;  // u = 0 node
    double h = 1.0;
    Value prev = zero();
    double err = std::numeric_limits<double>::infinity();
    for (int level = 0; level <= spec.max_subdivisions; ++level) {
        const LevelTable& tab = level_table(level);
        Value acc = zero();
        for (const Node& n : tab.nodes) {
            acc += f(n.t, n.omt) * n.w;
            acc += f(n.omt, n.t) * n.w;  // mirrored node u -> -u
        }
        if (level > 0) h *= 0.5, sum *= 0.5;
        sum += acc * ((level == 0) ? 1.0 : h);
        if (level >= 2) {
            err = norm(sum - prev);
            const double floor = 5e-15 * (1.0 + norm(sum));
            if (err <= std::max(spec.abs_tol, floor)) return sum;
        }
        prev = sum;
    }
    if (err > 100.0 * std::max(spec.abs_tol, 5e-15 * (1.0 + norm(prev))))
        throw NonConvergence(std::string(what) + ": tanh-sinh error estimate stalled at " +
                             std::to_string(err));
    return prev;
}

}  // namespace

cplx integrate_segment(const std::function<cplx(double, double)>& integrand, cplx a, cplx b,
                       const QuadratureSpec& spec) {
    spec.validate();
    const cplx scale = b - a;
    auto f = [&](double t, double omt) { return integrand(t, omt); };
    auto norm = [](const cplx& v) { return std::abs(v); };
    auto zero = []() { return cplx(0.0); };
    QuadratureSpec inner = spec;
    const double mag = std::abs(scale);
    if (mag > 0) inner.abs_tol = spec.abs_tol / mag;
    cplx unit = tanh_sinh_unit<cplx>(f, norm, zero, inner, "integrate_segment");
    return scale * unit;
}

Vec integrate_segment_vec(const std::function<Vec(double, double)>& integrand, cplx a, cplx b,
                          int dim, const QuadratureSpec& spec) {
    spec.validate();
    const cplx scale = b - a;
    auto norm = [](const Vec& v) { return v.cwiseAbs().maxCoeff(); };
    auto zero = [dim]() { return Vec(Vec::Zero(dim)); };
    QuadratureSpec inner = spec;
    const double mag = std::abs(scale);
    if (mag > 0) inner.abs_tol = spec.abs_tol / mag;
    Vec unit = tanh_sinh_unit<Vec>(integrand, norm, zero, inner, "integrate_segment_vec");
    return scale * unit;
}

}  // namespace zn
