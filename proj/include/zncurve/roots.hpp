#pragma once

// Branch tracking of the N values of an algebraic function along a path in the
// base plane, with a nearest-match pairing guard.

#include <functional>
#include <vector>

#include "zncurve/types.hpp"

namespace zn {

struct PathSpec {
    std::vector<cplx> vertices;  // polyline in the base plane
    int start_sheet = 1;         // 1-based index into the candidate list at vertices[0]
    double min_clearance = 0.0;  // required distance from excluded points (validated by callers)
};

struct RootTrack {
    cplx final_value;              // continuation of the starting root at the last vertex
    std::vector<int> permutation;  // permutation[i] = j: root starting at candidate i
                                   // ends at candidate j (0-based)
};

// candidates(lambda) must return the same unordered set of N root values that
// any branch continuation can pass through at that point (e.g. the N-th roots
// of a polynomial value). Steps are refined until every tracked root has a
// unique nearest candidate at least 10x closer than the runner-up.
RootTrack track_root(const PathSpec& path, const std::function<std::vector<cplx>(cplx)>& candidates);

}  // namespace zn
