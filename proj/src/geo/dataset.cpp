#include "folds/geo/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace folds::geo {

ImageU8 rgb_to_u8(const ImageF& rgb) {
    ImageU8 out(rgb.width, rgb.height, rgb.channels);
    for (size_t i = 0; i < rgb.pixels.size(); ++i) {
        const float v = std::clamp(rgb.pixels[i], 0.0f, 1.0f);
        out.pixels[i] = static_cast<uint8_t>(std::lround(v * 255.0f));
    }
    return out;
}

ImageU8 mask_to_u8(const ImageU8& binary01) {
    ImageU8 out(binary01.width, binary01.height, 1);
    for (size_t i = 0; i < binary01.pixels.size(); ++i)
        out.pixels[i] = binary01.pixels[i] ? 255 : 0;
    return out;
}

data::DatasetManifest generate_dataset(const TriMesh& mesh, const FoldLabeling& labels,
                                       const Trajectory& trajectory,
                                       const GenerateParams& params,
                                       const std::string& out_dir) {
    if (trajectory.poses.empty()) throw std::runtime_error("generate_dataset: empty trajectory");

    std::error_code ec;
    for (const char* sub : {"rgb", "mask", "instance", "depth"})
        fs::create_directories(fs::path(out_dir) / sub, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

    data::DatasetManifest manifest;
    manifest.name = params.split_name;
    manifest.role = params.role;
    manifest.fps = trajectory.fps;
    manifest.has_fold_labels = true;
    manifest.has_depth = true;
    manifest.provenance = "rendered from mesh";
    manifest.base_dir = out_dir;
    manifest.generation_params = nlohmann::json{{"width", params.width},
                                                {"height", params.height},
                                                {"fps", trajectory.fps},
                                                {"frames", trajectory.poses.size()}}
                                     .dump();

    char idbuf[16];
    for (size_t i = 0; i < trajectory.poses.size(); ++i) {
        const CameraPose& pose = trajectory.poses[i];
        const LabelFrame frame = render_frame(mesh, labels, pose, params.width, params.height);

        std::snprintf(idbuf, sizeof(idbuf), "%06zu", i);
        data::FrameRecord rec;
        rec.id = idbuf;
        rec.rgb = std::string("rgb/") + idbuf + ".png";
        rec.mask = std::string("mask/") + idbuf + ".png";
        rec.instance = std::string("instance/") + idbuf + ".png";
        rec.depth = std::string("depth/") + idbuf + ".pfm";
        rec.pose = {pose.position.x(), pose.position.y(), pose.position.z(),
                    pose.orientation.w, pose.orientation.x, pose.orientation.y,
                    pose.orientation.z};
        rec.intrinsics = {pose.fx, pose.fy, pose.cx, pose.cy};

        io::write_png(manifest.resolve(rec.rgb), rgb_to_u8(frame.rgb));
        io::write_png(manifest.resolve(rec.mask), mask_to_u8(frame.binary));
        io::write_png16(manifest.resolve(rec.instance), frame.instance);
        io::write_pfm(manifest.resolve(rec.depth), frame.depth);
        manifest.frames.push_back(std::move(rec));
    }

    data::save_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    return manifest;
}

}  // namespace folds::geo
