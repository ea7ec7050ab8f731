#pragma once

#include "folds/geo/curvature.hpp"

namespace folds::geo {

struct FoldLabeling {
    std::vector<uint8_t> is_fold;  // per-vertex
    std::vector<int> instance;     // 0 = background, 1..K contiguous
    int instance_count = 0;
};

struct FoldParams {
    double theta_dir = 0.15;    // direction-change score threshold
    double theta_curv = 0.25;   // 1/mm, max-curvature threshold
    int close_radius = 4;       // graph-hop radius of the morphological closing
    int min_component = 20;     // vertices; smaller fold components are dropped
};

// Per-vertex direction-change score: mean over 1-ring neighbors of
// (1 - |e1(v) . e1(u)|) after parallel transport of e1(u) into v's tangent
// plane. A vertex is a fold seed when score > theta_dir or kappa1 >
// theta_curv; umbilic or unreliable vertices never seed. The seed set is a
// crest's high-curvature band plus the thin rings where the principal
// direction flips at the crest flanks; a morphological closing (dilate then
// erode by close_radius graph hops) fills each crest into one solid band
// without bridging the wider gaps across troughs. Instances are
// edge-connected components of the closed fold set, ids 1..K contiguous.
FoldLabeling detect_folds(const TriMesh& mesh, const CurvatureField& field,
                          const FoldParams& params = {});

std::vector<double> direction_change_scores(const TriMesh& mesh, const CurvatureField& field);

}  // namespace folds::geo
