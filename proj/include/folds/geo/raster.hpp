#pragma once

#include "folds/core/image.hpp"
#include "folds/geo/camera.hpp"
#include "folds/geo/folds.hpp"

namespace folds::geo {

// One rendered sample. Depth is camera-space z in mm (distance along the
// optical axis); 0 marks no-hit pixels. RGB is flat headlight shading,
// intensity proportional to 1/depth^2 normalized per frame, so luminance is
// an invertible function of depth.
struct LabelFrame {
    ImageF rgb;            // HxWx3 in [0,1]
    ImageU8 binary;        // {0,1}
    ImageU16 instance;     // 0 background, instance ids as labeled
    ImageF depth;          // mm, 0 = sentinel
    CameraPose pose;
};

constexpr float kDepthSentinel = 0.0f;

// Perspective z-buffer rasterization with near-plane clipping. Per-pixel
// labels come from the nearest face's majority vertex label (barycentric
// tie-break when all three vertex ids differ). A camera inside the mesh and
// an all-background frame are both legal.
LabelFrame render_frame(const TriMesh& mesh, const FoldLabeling& labels,
                        const CameraPose& pose, int width, int height);

}  // namespace folds::geo
