#include "folds/translate/translate.hpp"

#include <filesystem>
#include <stdexcept>

#include "folds/core/convert.hpp"
#include "folds/core/image.hpp"

namespace fs = std::filesystem;

namespace folds::translate {

data::DatasetManifest translate_dataset(const nn::Checkpoint& ckpt,
                                        const data::DatasetManifest& input,
                                        const std::string& out_dir,
                                        const std::string& split_name) {
    TranslationModel model = TranslationModel::from_checkpoint(ckpt);
    const int size = model.cfg.image_size;
    const std::string ckpt_id = "ckpt-step" + std::to_string(ckpt.meta.value("step", 0)) +
                                "-seed" + std::to_string(ckpt.meta.value("seed", uint64_t{0}));

    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "rgb", ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

    data::DatasetManifest out;
    out.name = split_name;
    out.role = input.role;
    out.fps = input.fps;
    out.has_fold_labels = input.has_fold_labels;
    out.has_depth = input.has_depth;
    out.has_manual_annotations = input.has_manual_annotations;
    out.provenance = "translated from '" + input.name + "' with " + ckpt_id;
    out.base_dir = out_dir;

    bool copied_dirs = false;
    for (const auto& f : input.frames) {
        ImageU8 rgb = io::read_png(input.resolve(f.rgb));
        if (rgb.width != size || rgb.height != size)
            throw std::runtime_error("frame " + f.id + " resolution " +
                                     std::to_string(rgb.width) + "x" + std::to_string(rgb.height) +
                                     " does not match checkpoint resolution " +
                                     std::to_string(size));
        const Tensor translated = model.G->forward(tensor_from_u8(rgb));

        data::FrameRecord rec = f;
        rec.source_id = f.id;
        rec.rgb = "rgb/" + f.id + ".png";
        io::write_png(out.resolve(rec.rgb), u8_from_tensor(translated));

        // labels and depth copy over unchanged
        auto copy_side = [&](const std::string& rel, const char* sub, std::string* dst) {
            if (rel.empty()) {
                dst->clear();
                return;
            }
            if (!copied_dirs) fs::create_directories(fs::path(out_dir) / sub);
            const std::string out_rel =
                std::string(sub) + "/" + fs::path(rel).filename().string();
            fs::copy_file(input.resolve(rel), out.resolve(out_rel),
                          fs::copy_options::overwrite_existing);
            *dst = out_rel;
        };
        copy_side(f.mask, "mask", &rec.mask);
        copy_side(f.instance, "instance", &rec.instance);
        copy_side(f.depth, "depth", &rec.depth);
        copied_dirs = true;
        out.frames.push_back(std::move(rec));
    }

    data::save_manifest(out, (fs::path(out_dir) / "manifest.json").string());
    return out;
}

}  // namespace folds::translate
