#pragma once

#include "folds/nn/module.hpp"

namespace folds::nn {

class Conv2d : public Module {
public:
    Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride = 1, int pad = 0);

    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;
    void collect_params(std::vector<Param*>& out) override;
    void init(Rng& rng) override;

    int out_size(int in) const { return (in + 2 * pad_ - kernel_) / stride_ + 1; }

private:
    int in_ch_, out_ch_, kernel_, stride_, pad_;
    Param weight_;  // [out_ch, in_ch*k*k]
    Param bias_;    // [out_ch]
    Tensor cached_input_;
};

// Per-sample, per-channel normalization with affine parameters.
class InstanceNorm2d : public Module {
public:
    InstanceNorm2d(std::string name, int channels, float eps = 1e-5f);

    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;
    void collect_params(std::vector<Param*>& out) override;
    void init(Rng& rng) override;

private:
    int channels_;
    float eps_;
    Param gamma_, beta_;
    Tensor xhat_;
    std::vector<float> inv_std_;  // per (n, c)
};

class ReLU : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;

private:
    Tensor cached_input_;
};

class LeakyReLU : public Module {
public:
    explicit LeakyReLU(float slope = 0.2f) : slope_(slope) {}
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;

private:
    float slope_;
    Tensor cached_input_;
};

class Tanh : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;

private:
    Tensor cached_output_;
};

// Nearest-neighbor 2x upsampling.
class Upsample2x : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;

private:
    std::vector<int> in_shape_;
};

class Sequential : public Module {
public:
    Sequential() = default;
    explicit Sequential(std::vector<ModulePtr> mods) : mods_(std::move(mods)) {}

    void add(ModulePtr m) { mods_.push_back(std::move(m)); }
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;
    void collect_params(std::vector<Param*>& out) override;
    void init(Rng& rng) override;

private:
    std::vector<ModulePtr> mods_;
};

// y = x + body(x). Body must preserve shape.
class Residual : public Module {
public:
    explicit Residual(ModulePtr body) : body_(std::move(body)) {}
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out, bool accumulate = true) override;
    void collect_params(std::vector<Param*>& out) override;
    void init(Rng& rng) override;

private:
    ModulePtr body_;
};

}  // namespace folds::nn
