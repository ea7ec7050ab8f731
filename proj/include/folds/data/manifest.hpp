#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace folds::data {

// One rendered/captured sample. Paths are relative to the manifest file.
struct FrameRecord {
    std::string id;
    std::string rgb;
    std::string mask;      // binary fold mask PNG {0,255}; empty if unavailable
    std::string instance;  // 16-bit instance PNG; empty if unavailable
    std::string depth;     // float PFM; empty if unavailable
    std::array<double, 7> pose{};        // px py pz qw qx qy qz
    std::array<double, 4> intrinsics{};  // fx fy cx cy
    std::string source_id;               // provenance for translated frames
};

struct DatasetManifest {
    std::string name;
    std::string role;  // "train" or "test"
    double fps = 50.0;
    std::vector<FrameRecord> frames;
    bool has_fold_labels = false;
    bool has_depth = false;
    bool has_manual_annotations = false;
    std::string provenance;
    std::string generation_params;  // JSON blob of the generating config
    std::string base_dir;           // directory of the manifest file (set on load)

    std::string resolve(const std::string& rel) const;
};

void save_manifest(const DatasetManifest& m, const std::string& path);

// Parses and validates the manifest. With check_files, every referenced file
// must exist; missing paths are listed in the thrown message.
DatasetManifest load_manifest(const std::string& path, bool check_files = true);

}  // namespace folds::data
