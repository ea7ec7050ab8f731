#pragma once

#include "folds/data/manifest.hpp"
#include "folds/geo/raster.hpp"

namespace folds::geo {

struct GenerateParams {
    int width = 256;
    int height = 256;
    std::string split_name = "sim";
    std::string role = "train";
};

// Renders one LabelFrame per pose and writes rgb/mask/instance/depth files
// plus manifest.json under out_dir. Returns the manifest (also saved).
data::DatasetManifest generate_dataset(const TriMesh& mesh, const FoldLabeling& labels,
                                       const Trajectory& trajectory,
                                       const GenerateParams& params,
                                       const std::string& out_dir);

// Frame encoders shared with the translation/prediction writers.
ImageU8 rgb_to_u8(const ImageF& rgb);
ImageU8 mask_to_u8(const ImageU8& binary01);  // {0,1} -> {0,255}

}  // namespace folds::geo
