#include "zncurve/roots.hpp"

#include <cmath>

namespace zn {
namespace {

// Match each tracked value to its nearest candidate. Succeeds only when the
// pairing is injective and every match beats the runner-up by the guard
// factor; on failure the caller must shorten the step.
bool match_step(const std::vector<cplx>& tracked, const std::vector<cplx>& cand,
                std::vector<int>& out) {
    const int n = (int)tracked.size();
    out.assign(n, -1);
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        double best = 1e300, second = 1e300;
        int bi = -1;
        for (int j = 0; j < n; ++j) {
            double d = std::abs(tracked[i] - cand[j]);
            if (d < best) {
                second = best;
                best = d;
                bi = j;
            } else if (d < second) {
                second = d;
            }
        }
        // 10x separation guard between drift (best) and nearest other root.
        if (!(second >= 10.0 * best) && best > 0.0) return false;
        if (used[bi]) return false;
        used[bi] = true;
        out[i] = bi;
    }
    return true;
}

}  // namespace

RootTrack track_root(const PathSpec& path, const std::function<std::vector<cplx>(cplx)>& candidates) {
    if (path.vertices.empty()) throw DomainError("track_root: empty path");
    std::vector<cplx> initial = candidates(path.vertices.front());
    const int n = (int)initial.size();
    if (path.start_sheet < 1 || path.start_sheet > n)
        throw DomainError("track_root: start_sheet out of range");
    std::vector<cplx> tracked = initial;  // tracked[i] continues initial[i]
    std::vector<int> where(n);            // where[i] = current candidate index of branch i
    for (int i = 0; i < n; ++i) where[i] = i;

    std::vector<int> m;
    for (size_t v = 0; v + 1 < path.vertices.size(); ++v) {
        cplx a = path.vertices[v], b = path.vertices[v + 1];
        double t = 0.0, step = 1.0;
        while (t < 1.0) {
            double tn = std::min(1.0, t + step);
            std::vector<cplx> cand = candidates(a + tn * (b - a));
            if ((int)cand.size() != n)
                throw DomainError("track_root: candidate count changed along path");
            if (match_step(tracked, cand, m)) {
                for (int i = 0; i < n; ++i) tracked[i] = cand[m[i]];
                t = tn;
                step = std::min(1.0, step * 1.9);
            } else {
                step *= 0.5;
                if (step < 1e-7)
                    throw AmbiguousMatching(
                        "track_root: root candidates too close to separate; refine the path "
                        "away from branch points");
            }
        }
    }
    std::vector<cplx> fin = candidates(path.vertices.back());
    std::vector<int> final_match;
    if (!match_step(tracked, fin, final_match))
        throw AmbiguousMatching("track_root: ambiguous matching at the final vertex");
    RootTrack r;
    r.permutation = final_match;
    r.final_value = tracked[path.start_sheet - 1];
    return r;
}

}  // namespace zn
