#pragma once

#include <cmath>
#include <vector>

#include "folds/nn/module.hpp"

namespace folds::nn {

// Adaptive-moment optimizer (CycleGAN convention: lr 2e-4, betas 0.5/0.999).
class Adam {
public:
    Adam(std::vector<Param*> params, float lr, float beta1 = 0.5f, float beta2 = 0.999f,
         float eps = 1e-8f)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        for (Param* p : params_) {
            m_.emplace_back(p->value.shape());
            v_.emplace_back(p->value.shape());
        }
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(static_cast<double>(beta1_), t_);
        const double bc2 = 1.0 - std::pow(static_cast<double>(beta2_), t_);
        const float alpha = static_cast<float>(lr_ * std::sqrt(bc2) / bc1);
        for (size_t k = 0; k < params_.size(); ++k) {
            Param* p = params_[k];
            Tensor& m = m_[k];
            Tensor& v = v_[k];
            for (int64_t i = 0; i < p->value.numel(); ++i) {
                const float g = p->grad[i];
                m[i] = beta1_ * m[i] + (1.0f - beta1_) * g;
                v[i] = beta2_ * v[i] + (1.0f - beta2_) * g * g;
                p->value[i] -= alpha * m[i] / (std::sqrt(v[i]) + eps_);
            }
        }
    }

    void zero_grad() { zero_grads(params_); }

    int step_count() const { return t_; }
    void set_step_count(int t) { t_ = t; }

    // Moment buffers, exposed for checkpointing.
    std::vector<Tensor>& moments1() { return m_; }
    std::vector<Tensor>& moments2() { return v_; }

private:
    std::vector<Param*> params_;
    float lr_, beta1_, beta2_, eps_;
    int t_ = 0;
    std::vector<Tensor> m_, v_;
};

// Plain SGD with momentum and an externally driven learning rate.
class Sgd {
public:
    Sgd(std::vector<Param*> params, float lr, float momentum = 0.9f)
        : params_(std::move(params)), lr_(lr), momentum_(momentum) {
        for (Param* p : params_) vel_.emplace_back(p->value.shape());
    }

    void set_lr(float lr) { lr_ = lr; }
    float lr() const { return lr_; }

    void step() {
        for (size_t k = 0; k < params_.size(); ++k) {
            Param* p = params_[k];
            Tensor& v = vel_[k];
            for (int64_t i = 0; i < p->value.numel(); ++i) {
                v[i] = momentum_ * v[i] + p->grad[i];
                p->value[i] -= lr_ * v[i];
            }
        }
    }

    void zero_grad() { zero_grads(params_); }

private:
    std::vector<Param*> params_;
    float lr_, momentum_;
    std::vector<Tensor> vel_;
};

inline float cosine_lr(float base_lr, int epoch, int total_epochs) {
    const double t = static_cast<double>(epoch) / static_cast<double>(total_epochs);
    return static_cast<float>(base_lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * t)));
}

}  // namespace folds::nn
