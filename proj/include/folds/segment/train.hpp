#pragma once

#include <string>
#include <vector>

#include "folds/core/image.hpp"
#include "folds/segment/batches.hpp"
#include "folds/segment/model.hpp"

namespace folds::segment {

struct EpochStats {
    int epoch = 0;
    float loss = 0.0f;
    float train_iou = 0.0f;
    float lr = 0.0f;
};

struct SegTrainConfig {
    SegConfig model;
    int epochs = 150;
    float lr = 1e-2f;
    int triples_per_batch = 8;
    uint64_t seed = 0;
    bool augment = false;
    int checkpoint_interval = 0;  // 0: final only
    std::string out_dir;
};

// Supervised trainer over paired batches: each step trains on both texture
// variants of the frames against the shared mask. SGD with momentum and a
// cosine learning-rate schedule. Deterministic under (seed, config).
class SegTrainer {
public:
    SegTrainer(const SegTrainConfig& cfg, const PairedBatchStream& stream);

    std::vector<EpochStats> run();  // trains, checkpoints, writes loss_log.csv

    SegModel& model() { return model_; }
    const std::vector<EpochStats>& log() const { return log_; }

private:
    EpochStats run_epoch(int epoch);

    SegTrainConfig cfg_;
    const PairedBatchStream& stream_;
    SegModel model_;
    std::vector<EpochStats> log_;
};

void write_seg_log(const std::vector<EpochStats>& log, const std::string& path);

struct Prediction {
    ImageU8 mask;    // {0,1}
    Tensor scores;   // [1,2,H,W]
};

// Inference on one image already converted to a [1,C,H,W] tensor in [-1,1].
Prediction predict_mask(SegModel& model, const Tensor& image);

}  // namespace folds::segment
