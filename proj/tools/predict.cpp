#include <filesystem>

#include <CLI11.hpp>

#include "folds/core/convert.hpp"
#include "folds/geo/dataset.hpp"
#include "folds/segment/instances.hpp"
#include "folds/segment/train.hpp"

namespace fs = std::filesystem;
using namespace folds;

namespace {

void predict_one(segment::SegModel& model, const std::string& id, const ImageU8& rgb,
                 const std::string& out_dir, int min_area) {
    segment::Prediction pred = segment::predict_mask(model, tensor_from_u8(rgb));
    io::write_png((fs::path(out_dir) / (id + "_mask.png")).string(),
                  geo::mask_to_u8(pred.mask));
    io::write_png16((fs::path(out_dir) / (id + "_instance.png")).string(),
                    segment::extract_instances(pred.mask, min_area));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run fold segmentation on a manifest or a single image"};
    std::string ckpt_path, in_path, out_dir;
    int min_area = -1;
    app.add_option("--ckpt", ckpt_path, "segmentation checkpoint")->required();
    app.add_option("--in", in_path, "dataset manifest or PNG image")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--min-area", min_area,
                   "minimum instance area in px (default: 50 scaled from 256x256)");
    CLI11_PARSE(app, argc, argv);

    try {
        segment::SegModel model =
            segment::SegModel::from_checkpoint(nn::Checkpoint::load(ckpt_path));
        const int size = model.config().image_size;
        if (min_area < 0) min_area = std::max(1, 50 * size * size / (256 * 256));
        fs::create_directories(out_dir);

        size_t count = 0;
        if (in_path.size() > 4 && in_path.substr(in_path.size() - 4) == ".png") {
            predict_one(model, fs::path(in_path).stem().string(), io::read_png(in_path),
                        out_dir, min_area);
            count = 1;
        } else {
            data::DatasetManifest ds = data::load_manifest(in_path);
            for (const data::FrameRecord& f : ds.frames) {
                predict_one(model, f.id, io::read_png(ds.resolve(f.rgb)), out_dir, min_area);
                ++count;
            }
        }
        std::printf("wrote predictions for %zu frames to %s\n", count, out_dir.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
