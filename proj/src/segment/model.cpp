#include "folds/segment/model.hpp"

#include <stdexcept>

namespace folds::segment {

using nn::Conv2d;
using nn::InstanceNorm2d;
using nn::ModulePtr;
using nn::ReLU;
using nn::Sequential;

namespace {

ModulePtr conv_block(const std::string& name, int in_ch, int out_ch, int stride) {
    auto s = std::make_unique<Sequential>();
    s->add(std::make_unique<Conv2d>(name + ".conv", in_ch, out_ch, 3, stride, 1));
    s->add(std::make_unique<InstanceNorm2d>(name + ".norm", out_ch));
    s->add(std::make_unique<ReLU>());
    return s;
}

class TinyConvBackbone : public Backbone {
public:
    TinyConvBackbone(int in_channels, int width)
        : width_(width),
          stage1_(conv_block("backbone.s1", in_channels, width, 1)),
          stage2_(conv_block("backbone.s2", width, 2 * width, 2)),
          stage3_(conv_block("backbone.s3", 2 * width, 4 * width, 2)) {}

    std::string id() const override { return "tiny-conv"; }
    int base_width() const override { return width_; }

    std::vector<Tensor> forward(const Tensor& x) override {
        std::vector<Tensor> feats;
        feats.push_back(stage1_->forward(x));
        feats.push_back(stage2_->forward(feats[0]));
        feats.push_back(stage3_->forward(feats[1]));
        return feats;
    }

    Tensor backward(const std::vector<Tensor>& grad_feats, bool accumulate) override {
        Tensor g2 = stage3_->backward(grad_feats[2], accumulate);
        for (int64_t i = 0; i < g2.numel(); ++i) g2[i] += grad_feats[1][i];
        Tensor g1 = stage2_->backward(g2, accumulate);
        for (int64_t i = 0; i < g1.numel(); ++i) g1[i] += grad_feats[0][i];
        return stage1_->backward(g1, accumulate);
    }

    void collect_params(std::vector<nn::Param*>& out) override {
        stage1_->collect_params(out);
        stage2_->collect_params(out);
        stage3_->collect_params(out);
    }

    void init(Rng& rng) override {
        stage1_->init(rng);
        stage2_->init(rng);
        stage3_->init(rng);
    }

private:
    int width_;
    ModulePtr stage1_, stage2_, stage3_;
};

}  // namespace

std::unique_ptr<Backbone> make_backbone(const std::string& id, int in_channels, int width) {
    if (id == "tiny-conv") return std::make_unique<TinyConvBackbone>(in_channels, width);
    throw std::runtime_error(
        "backbone '" + id +
        "' is an external pretrained adapter slot; no weights are bundled (use 'tiny-conv')");
}

nlohmann::json SegConfig::to_json() const {
    return {{"backbone", backbone},
            {"freeze_backbone", freeze_backbone},
            {"in_channels", in_channels},
            {"width", width},
            {"image_size", image_size}};
}

SegConfig SegConfig::from_json(const nlohmann::json& j) {
    SegConfig c;
    c.backbone = j.value("backbone", c.backbone);
    c.freeze_backbone = j.value("freeze_backbone", c.freeze_backbone);
    c.in_channels = j.value("in_channels", c.in_channels);
    c.width = j.value("width", c.width);
    c.image_size = j.value("image_size", c.image_size);
    return c;
}

SegModel::SegModel(const SegConfig& cfg, uint64_t seed)
    : cfg_(cfg), backbone_(make_backbone(cfg.backbone, cfg.in_channels, cfg.width)) {
    const int w = cfg.width;
    p3_ = conv_block("decoder.p3", 4 * w, 2 * w, 1);
    p2_ = conv_block("decoder.p2", 2 * w, 2 * w, 1);
    p1_ = conv_block("decoder.p1", w, w, 1);
    c2_ = conv_block("decoder.c2", 2 * w, w, 1);
    c1_ = conv_block("decoder.c1", w, w, 1);
    head_ = std::make_unique<Conv2d>("decoder.head", w, 2, 3, 1, 1);

    Rng rng(seed);
    backbone_->init(rng);
    p3_->init(rng);
    p2_->init(rng);
    p1_->init(rng);
    c2_->init(rng);
    c1_->init(rng);
    head_->init(rng);
}

Tensor SegModel::forward(const Tensor& x) {
    feats_ = backbone_->forward(x);
    Tensor d3 = p3_->forward(feats_[2]);
    Tensor u3 = up32_.forward(d3);
    Tensor s2 = p2_->forward(feats_[1]);
    for (int64_t i = 0; i < u3.numel(); ++i) u3[i] += s2[i];
    Tensor d2 = c2_->forward(u3);
    Tensor u2 = up21_.forward(d2);
    Tensor s1 = p1_->forward(feats_[0]);
    for (int64_t i = 0; i < u2.numel(); ++i) u2[i] += s1[i];
    return head_->forward(c1_->forward(u2));
}

void SegModel::backward(const Tensor& grad_scores) {
    const bool train_backbone = !cfg_.freeze_backbone;
    Tensor g_m1 = c1_->backward(head_->backward(grad_scores, true), true);
    Tensor g_f1 = p1_->backward(g_m1, true);
    Tensor g_m2 = c2_->backward(up21_.backward(g_m1), true);
    Tensor g_f2 = p2_->backward(g_m2, true);
    Tensor g_f3 = p3_->backward(up32_.backward(g_m2), true);
    backbone_->backward({g_f1, g_f2, g_f3}, train_backbone);
}

std::vector<nn::Param*> SegModel::all_params() {
    std::vector<nn::Param*> out;
    backbone_->collect_params(out);
    p3_->collect_params(out);
    p2_->collect_params(out);
    p1_->collect_params(out);
    c2_->collect_params(out);
    c1_->collect_params(out);
    head_->collect_params(out);
    return out;
}

std::vector<nn::Param*> SegModel::trainable_params() {
    std::vector<nn::Param*> out;
    if (!cfg_.freeze_backbone) backbone_->collect_params(out);
    p3_->collect_params(out);
    p2_->collect_params(out);
    p1_->collect_params(out);
    c2_->collect_params(out);
    c1_->collect_params(out);
    head_->collect_params(out);
    return out;
}

nn::Checkpoint SegModel::to_checkpoint(uint64_t seed, int epoch) const {
    nn::Checkpoint ckpt;
    ckpt.meta["kind"] = "segment";
    ckpt.meta["arch"] = cfg_.to_json();
    ckpt.meta["seed"] = seed;
    ckpt.meta["epoch"] = epoch;
    for (nn::Param* p : const_cast<SegModel*>(this)->all_params()) ckpt.add(p->name, p->value);
    return ckpt;
}

SegModel SegModel::from_checkpoint(const nn::Checkpoint& ckpt) {
    if (ckpt.meta.value("kind", "") != "segment")
        throw std::runtime_error("checkpoint is not a segmentation checkpoint");
    SegModel m(SegConfig::from_json(ckpt.meta.at("arch")), ckpt.meta.value("seed", uint64_t{0}));
    for (nn::Param* p : m.all_params()) p->value = ckpt.require(p->name);
    return m;
}

ImageU8 argmax_mask(const Tensor& scores, int sample) {
    const int h = scores.dim(2), w = scores.dim(3);
    ImageU8 mask(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            mask.at(x, y) = scores.at(sample, 1, y, x) > scores.at(sample, 0, y, x) ? 1 : 0;
    return mask;
}

}  // namespace folds::segment
