#include "folds/segment/batches.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "folds/core/convert.hpp"
#include "folds/core/image.hpp"
#include "folds/core/rng.hpp"

namespace folds::segment {
namespace {

Tensor mask_tensor(const ImageU8& img) {
    Tensor t({1, 1, img.height, img.width});
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) t.at(0, 0, y, x) = img.at(x, y) > 127 ? 1.0f : 0.0f;
    return t;
}

// One shared spatial transform for a triple: optional flips plus a small
// rotation, nearest-neighbor sampling. `fill` is the out-of-bounds value.
struct PairTransform {
    bool hflip = false;
    bool vflip = false;
    double angle_rad = 0.0;

    Tensor apply(const Tensor& src, float fill) const {
        const int c = src.dim(1), h = src.dim(2), w = src.dim(3);
        Tensor dst(src.shape());
        const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
        const double ca = std::cos(angle_rad), sa = std::sin(angle_rad);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                // inverse-map destination to source
                double dx = x - cx, dy = y - cy;
                double sx = ca * dx + sa * dy + cx;
                double sy = -sa * dx + ca * dy + cy;
                if (hflip) sx = (w - 1) - sx;
                if (vflip) sy = (h - 1) - sy;
                const int ix = static_cast<int>(std::lround(sx));
                const int iy = static_cast<int>(std::lround(sy));
                const bool inside = ix >= 0 && ix < w && iy >= 0 && iy < h;
                for (int ch = 0; ch < c; ++ch)
                    dst.at(0, ch, y, x) = inside ? src.at(0, ch, iy, ix) : fill;
            }
        }
        return dst;
    }
};

}  // namespace

PairedBatchStream::PairedBatchStream(const data::DatasetManifest& sim,
                                     const data::DatasetManifest& aug,
                                     const PairedBatchConfig& cfg)
    : cfg_(cfg) {
    if (cfg.triples_per_batch <= 0) throw std::invalid_argument("triples_per_batch must be > 0");

    std::map<std::string, const data::FrameRecord*> sim_by_id, aug_by_id;
    for (const auto& f : sim.frames) sim_by_id[f.id] = &f;
    for (const auto& f : aug.frames) aug_by_id[f.id] = &f;

    std::string missing;
    for (const auto& [id, _] : sim_by_id)
        if (!aug_by_id.count(id)) missing += " " + id + "(sim-only)";
    for (const auto& [id, _] : aug_by_id)
        if (!sim_by_id.count(id)) missing += " " + id + "(aug-only)";
    if (!missing.empty())
        throw std::runtime_error("paired manifests have mismatched frame ids:" + missing);
    if (sim_by_id.empty()) throw std::runtime_error("paired manifests are empty");

    for (const auto& [id, sf] : sim_by_id) {
        const data::FrameRecord* af = aug_by_id.at(id);
        if (sf->mask.empty())
            throw std::runtime_error("frame " + id + " has no mask; segmentation needs labels");
        ImageU8 sim_rgb = io::read_png(sim.resolve(sf->rgb));
        ImageU8 aug_rgb = io::read_png(aug.resolve(af->rgb));
        ImageU8 mask = io::read_png(sim.resolve(sf->mask));
        if (sim_rgb.width != cfg.image_size || sim_rgb.height != cfg.image_size ||
            aug_rgb.width != cfg.image_size || aug_rgb.height != cfg.image_size)
            throw std::runtime_error("frame " + id + " does not match configured image size");
        ids_.push_back(id);
        sim_images_.push_back(tensor_from_u8(sim_rgb));
        aug_images_.push_back(tensor_from_u8(aug_rgb));
        masks_.push_back(mask_tensor(mask));
    }
}

int PairedBatchStream::batches_per_epoch() const {
    return (frame_count() + cfg_.triples_per_batch - 1) / cfg_.triples_per_batch;
}

std::vector<PairedBatch> PairedBatchStream::epoch(int epoch_index) const {
    Rng rng(cfg_.seed ^ (0x5851f42d4c957f2dull * static_cast<uint64_t>(epoch_index + 1)));
    std::vector<int> order(ids_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);

    const int c = sim_images_.front().dim(1);
    const int h = cfg_.image_size, w = cfg_.image_size;
    const int64_t chw = int64_t(c) * h * w;
    const int64_t hw = int64_t(h) * w;

    std::vector<PairedBatch> out;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg_.triples_per_batch)) {
        const int b = static_cast<int>(
            std::min(order.size() - start, static_cast<size_t>(cfg_.triples_per_batch)));
        PairedBatch batch;
        batch.sim = Tensor({b, c, h, w});
        batch.aug = Tensor({b, c, h, w});
        batch.mask = Tensor({b, 1, h, w});
        for (int k = 0; k < b; ++k) {
            const auto idx = static_cast<size_t>(order[start + static_cast<size_t>(k)]);
            batch.frame_ids.push_back(ids_[idx]);
            Tensor sim_t = sim_images_[idx];
            Tensor aug_t = aug_images_[idx];
            Tensor mask_t = masks_[idx];
            if (cfg_.augment) {
                PairTransform t;
                t.hflip = rng.uniform() < 0.5;
                t.vflip = rng.uniform() < 0.5;
                t.angle_rad = rng.uniform(-10.0, 10.0) * (3.14159265358979323846 / 180.0);
                sim_t = t.apply(sim_t, -1.0f);
                aug_t = t.apply(aug_t, -1.0f);
                mask_t = t.apply(mask_t, 0.0f);
            }
            std::copy_n(sim_t.data(), chw, batch.sim.data() + int64_t(k) * chw);
            std::copy_n(aug_t.data(), chw, batch.aug.data() + int64_t(k) * chw);
            std::copy_n(mask_t.data(), hw, batch.mask.data() + int64_t(k) * hw);
        }
        out.push_back(std::move(batch));
    }
    return out;
}

}  // namespace folds::segment
