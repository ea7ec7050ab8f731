#pragma once

#include "folds/geo/mesh.hpp"

namespace folds::geo {

// Per-vertex principal curvature frame. Sign convention: a sphere with
// outward normals has positive curvature, so crests bulging along the normal
// report kappa1 > 0.
struct CurvatureField {
    std::vector<double> kappa1;  // max principal curvature, 1/mm
    std::vector<double> kappa2;  // min principal curvature, kappa1 >= kappa2
    std::vector<Vec3> dir1;      // unit direction of kappa1
    std::vector<Vec3> dir2;      // unit direction of kappa2
    std::vector<Vec3> normal;
    std::vector<uint8_t> umbilic;    // |k1 - k2| below threshold; directions unreliable
    std::vector<uint8_t> unreliable; // too few neighbors / isolated; excluded downstream
};

struct CurvatureParams {
    int ring = 2;               // neighborhood depth for the quadric fit
    double umbilic_abs = 0.01;  // 1/mm
    double umbilic_rel = 0.05;  // fraction of |k1|+|k2|
};

// Quadric (second-fundamental-form) fit over the ring neighborhood in the
// tangent plane of each vertex. Vertices with fewer than 3 distinct
// neighbors are flagged unreliable, never a failure.
CurvatureField estimate_curvature(const TriMesh& mesh, const CurvatureParams& params = {});

}  // namespace folds::geo
