#pragma once

#include <json.hpp>

#include "folds/core/image.hpp"
#include "folds/nn/checkpoint.hpp"
#include "folds/nn/layers.hpp"

namespace folds::segment {

// Injected feature extractor: image -> pyramid at full, 1/2 and 1/4
// resolution with widths (w, 2w, 4w). Pretrained foundation backbones plug
// in behind this interface; they are consumed, never trained here.
class Backbone {
public:
    virtual ~Backbone() = default;
    virtual std::string id() const = 0;
    virtual int base_width() const = 0;
    virtual std::vector<Tensor> forward(const Tensor& x) = 0;
    // grad_feats aligned with forward()'s pyramid; returns grad w.r.t. input.
    virtual Tensor backward(const std::vector<Tensor>& grad_feats, bool accumulate) = 0;
    virtual void collect_params(std::vector<nn::Param*>& out) = 0;
    virtual void init(Rng& rng) = 0;
};

// "tiny-conv": small convolutional encoder for desk-scale runs. Any other id
// is an adapter slot for an external pretrained backbone and is rejected
// until such weights are provided.
std::unique_ptr<Backbone> make_backbone(const std::string& id, int in_channels, int width);

struct SegConfig {
    std::string backbone = "tiny-conv";
    bool freeze_backbone = false;
    int in_channels = 3;
    int width = 16;
    int image_size = 256;

    nlohmann::json to_json() const;
    static SegConfig from_json(const nlohmann::json& j);
};

// Backbone + additive-skip decoder producing a 2-class score map at input
// resolution.
class SegModel {
public:
    SegModel(const SegConfig& cfg, uint64_t seed);

    Tensor forward(const Tensor& x);                     // [N,C,H,W] -> [N,2,H,W]
    void backward(const Tensor& grad_scores);            // accumulates trainable grads
    std::vector<nn::Param*> trainable_params();          // excludes frozen backbone
    std::vector<nn::Param*> all_params();

    const SegConfig& config() const { return cfg_; }

    nn::Checkpoint to_checkpoint(uint64_t seed, int epoch) const;
    static SegModel from_checkpoint(const nn::Checkpoint& ckpt);

private:
    SegConfig cfg_;
    std::unique_ptr<Backbone> backbone_;
    // decoder
    nn::ModulePtr p3_, p2_, p1_;  // lateral projections
    nn::ModulePtr c2_, c1_;       // fuse stages
    nn::ModulePtr head_;
    nn::Upsample2x up32_, up21_;
    std::vector<Tensor> feats_;
};

// Argmax over the 2-class score map -> {0,1} mask.
ImageU8 argmax_mask(const Tensor& scores, int sample = 0);

}  // namespace folds::segment
