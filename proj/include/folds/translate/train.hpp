#pragma once

#include <functional>
#include <optional>
#include <string>

#include "folds/data/manifest.hpp"
#include "folds/translate/model.hpp"
#include "folds/translate/oracle.hpp"

namespace folds::translate {

// One log line per step: step,adv_G,adv_F,cyc,id,depth,disc_X,disc_Y
struct StepLosses {
    double adv_G = 0, adv_F = 0, cyc = 0, id = 0, depth = 0, disc_X = 0, disc_Y = 0;
};

struct TrainTranslateConfig {
    TranslatorConfig model;
    int steps = 1000;
    uint64_t seed = 0;
    int checkpoint_interval = 0;  // 0 = final checkpoint only
    std::string out_dir;
    std::string oracle_id = "stub";
};

// In-memory training corpus; each image is a [1,C,H,W] tensor in [-1,1].
// Depth tensors align with sim_images; entries may be absent when the depth
// term is disabled.
struct TranslateTrainData {
    std::vector<Tensor> sim_images;
    std::vector<Tensor> sim_depth;
    std::vector<Tensor> real_images;
};

TranslateTrainData load_translate_data(const data::DatasetManifest& sim,
                                       const data::DatasetManifest& real, int image_size,
                                       bool with_depth);

class TranslationTrainer {
public:
    TranslationTrainer(TranslationModel model, const TrainTranslateConfig& cfg,
                       DepthOracle* oracle);

    // Loss components only, no parameter update; x/y are [1,C,H,W], gt_depth
    // aligned with x ([1,1,H,W]) or null when lambda_depth is 0.
    StepLosses compute_losses(const Tensor& x, const Tensor& y, const Tensor* gt_depth);

    // One alternating generator/discriminator update.
    StepLosses step(const Tensor& x, const Tensor& y, const Tensor* gt_depth);

    // Full run over the corpus; emits the loss CSV and checkpoints into
    // cfg.out_dir when set. Aborts with a diagnostic on non-finite losses.
    std::vector<StepLosses> run(const TranslateTrainData& data);

    TranslationModel& model() { return model_; }
    int oracle_clamp_warnings() const { return clamp_warnings_; }

private:
    StepLosses generator_update(const Tensor& x, const Tensor& y, const Tensor* gt_depth);
    void discriminator_update(const Tensor& x, const Tensor& y, const Tensor& fake_x,
                              const Tensor& fake_y, StepLosses& losses);
    double depth_term(const Tensor& fake_y, const Tensor& gt_depth, Tensor* grad_fake_y);

    TranslationModel model_;
    TrainTranslateConfig cfg_;
    DepthOracle* oracle_;
    nn::Adam opt_gen_;
    nn::Adam opt_disc_;
    Rng rng_;
    int step_count_ = 0;
    int clamp_warnings_ = 0;
    Tensor last_fake_x_, last_fake_y_;
};

void write_loss_log(const std::vector<StepLosses>& log, const std::string& path);

}  // namespace folds::translate
