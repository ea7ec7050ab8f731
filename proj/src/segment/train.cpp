#include "folds/segment/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "folds/nn/loss.hpp"
#include "folds/nn/optim.hpp"

namespace fs = std::filesystem;

namespace folds::segment {
namespace {

// intersection/union of argmax predictions against the batch masks
void accumulate_iou(const Tensor& scores, const Tensor& mask, int64_t* inter, int64_t* uni) {
    const int n = scores.dim(0), h = scores.dim(2), w = scores.dim(3);
    for (int s = 0; s < n; ++s) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const bool p = scores.at(s, 1, y, x) > scores.at(s, 0, y, x);
                const bool g = mask.at(s, 0, y, x) > 0.5f;
                *inter += (p && g) ? 1 : 0;
                *uni += (p || g) ? 1 : 0;
            }
        }
    }
}

}  // namespace

SegTrainer::SegTrainer(const SegTrainConfig& cfg, const PairedBatchStream& stream)
    : cfg_(cfg), stream_(stream), model_(cfg.model, cfg.seed) {
    if (cfg.epochs <= 0) throw std::invalid_argument("epochs must be > 0");
    if (cfg.lr <= 0.0f) throw std::invalid_argument("learning rate must be > 0");
}

EpochStats SegTrainer::run_epoch(int epoch) {
    nn::Sgd opt(model_.trainable_params(), nn::cosine_lr(cfg_.lr, epoch, cfg_.epochs));

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = opt.lr();
    double loss_sum = 0.0;
    int64_t inter = 0, uni = 0;
    int step_count = 0;

    for (const PairedBatch& batch : stream_.epoch(epoch)) {
        opt.zero_grad();
        float loss = 0.0f;
        for (const Tensor* image : {&batch.sim, &batch.aug}) {
            Tensor scores = model_.forward(*image);
            Tensor grad(scores.shape());
            loss += 0.5f * nn::seg_loss(scores, batch.mask, &grad);
            for (int64_t i = 0; i < grad.numel(); ++i) grad[i] *= 0.5f;
            model_.backward(grad);
            accumulate_iou(scores, batch.mask, &inter, &uni);
        }
        if (!std::isfinite(loss))
            throw std::runtime_error("segmentation loss diverged at epoch " +
                                     std::to_string(epoch) + " step " +
                                     std::to_string(step_count) + ": loss=" +
                                     std::to_string(loss));
        opt.step();
        loss_sum += loss;
        ++step_count;
    }

    stats.loss = static_cast<float>(loss_sum / std::max(step_count, 1));
    stats.train_iou = uni == 0 ? 1.0f : static_cast<float>(double(inter) / double(uni));
    return stats;
}

std::vector<EpochStats> SegTrainer::run() {
    const bool persist = !cfg_.out_dir.empty();  // empty out_dir: train in memory only
    if (persist) fs::create_directories(cfg_.out_dir);
    for (int e = 0; e < cfg_.epochs; ++e) {
        log_.push_back(run_epoch(e));
        if (persist && cfg_.checkpoint_interval > 0 && (e + 1) % cfg_.checkpoint_interval == 0) {
            char name[48];
            std::snprintf(name, sizeof(name), "ckpt_%04d.fckpt", e + 1);
            model_.to_checkpoint(cfg_.seed, e + 1).save((fs::path(cfg_.out_dir) / name).string());
        }
    }
    if (persist) {
        model_.to_checkpoint(cfg_.seed, cfg_.epochs)
            .save((fs::path(cfg_.out_dir) / "ckpt_final.fckpt").string());
        write_seg_log(log_, (fs::path(cfg_.out_dir) / "loss_log.csv").string());
    }
    return log_;
}

void write_seg_log(const std::vector<EpochStats>& log, const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "epoch,loss,train_iou,lr\n");
    for (const EpochStats& s : log)
        std::fprintf(f, "%d,%.6f,%.6f,%.6g\n", s.epoch, s.loss, s.train_iou, s.lr);
    std::fclose(f);
}

Prediction predict_mask(SegModel& model, const Tensor& image) {
    if (image.dim(2) != model.config().image_size || image.dim(3) != model.config().image_size)
        throw std::runtime_error("input resolution " + std::to_string(image.dim(3)) + "x" +
                                 std::to_string(image.dim(2)) +
                                 " does not match model resolution " +
                                 std::to_string(model.config().image_size));
    Prediction p;
    p.scores = model.forward(image);
    p.mask = argmax_mask(p.scores);
    return p;
}

}  // namespace folds::segment
