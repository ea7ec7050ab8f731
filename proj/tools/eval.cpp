#include <filesystem>

#include <CLI11.hpp>

#include "folds/data/manifest.hpp"
#include "folds/eval/matching.hpp"
#include "folds/eval/metrics.hpp"
#include "folds/eval/overlay.hpp"

namespace fs = std::filesystem;
using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Score predicted masks against ground truth and render overlays"};
    std::string pred_path, gt_path, out_dir;
    double tau = 0.5;
    int overlays = 8;
    eval::RunMeta meta{"model", "train", "N.A.", "eval"};
    app.add_option("--pred", pred_path,
                   "prediction directory (<id>_mask.png, <id>_instance.png) or manifest")
        ->required();
    app.add_option("--gt", gt_path, "ground-truth dataset manifest")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--tau", tau, "instance-match overlap threshold");
    app.add_option("--overlays", overlays, "number of overlay figures to render");
    app.add_option("--model", meta.model, "run metadata: model id");
    app.add_option("--train-set", meta.train_set, "run metadata: training set");
    app.add_option("--translation", meta.translation, "run metadata: translation method");
    app.add_option("--eval-set", meta.eval_set, "run metadata: evaluation set");
    CLI11_PARSE(app, argc, argv);

    try {
        folds::data::DatasetManifest gt = folds::data::load_manifest(gt_path);
        const bool pred_is_manifest = !fs::is_directory(pred_path);
        folds::data::DatasetManifest pred_manifest;
        if (pred_is_manifest) pred_manifest = folds::data::load_manifest(pred_path);

        auto pred_file = [&](const std::string& id, const char* kind) -> std::string {
            if (pred_is_manifest) {
                for (const auto& f : pred_manifest.frames)
                    if (f.id == id)
                        return pred_manifest.resolve(std::string(kind) == "mask" ? f.mask
                                                                                 : f.instance);
                throw std::runtime_error("prediction manifest lacks frame " + id);
            }
            return (fs::path(pred_path) / (id + "_" + kind + ".png")).string();
        };

        fs::create_directories(out_dir);
        const std::string overlay_dir = (fs::path(out_dir) / "overlays").string();
        fs::create_directories(overlay_dir);

        std::vector<double> ious;
        int rendered = 0;
        for (const folds::data::FrameRecord& f : gt.frames) {
            if (f.mask.empty())
                throw std::runtime_error("ground-truth frame " + f.id + " has no mask");
            ImageU8 pred_mask = io::read_png(pred_file(f.id, "mask"));
            ImageU8 gt_mask = io::read_png(gt.resolve(f.mask));
            ious.push_back(eval::binary_iou(pred_mask, gt_mask));

            if (rendered < overlays && !f.instance.empty()) {
                ImageU16 pred_inst = io::read_png16(pred_file(f.id, "instance"));
                ImageU16 gt_inst = io::read_png16(gt.resolve(f.instance));
                eval::MatchResult match = eval::match_instances(pred_inst, gt_inst, tau);
                ImageU8 rgb = io::read_png(gt.resolve(f.rgb));
                io::write_png((fs::path(overlay_dir) / (f.id + "_overlay.png")).string(),
                              eval::render_overlay(rgb, pred_inst, match));
                ++rendered;
            }
        }

        eval::MetricReport report = eval::MetricReport::from_frames(meta, std::move(ious));
        eval::save_metric_report(report, (fs::path(out_dir) / "metrics.json").string());
        std::printf("%zu frames: IoU %.2f ± %.2f\n", report.per_frame.size(), report.mean,
                    report.std);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
