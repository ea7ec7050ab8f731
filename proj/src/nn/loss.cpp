#include "folds/nn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace folds::nn {

float mse_loss(const Tensor& pred, float target, Tensor* grad) {
    const int64_t n = pred.numel();
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double d = pred[i] - target;
        acc += d * d;
        if (grad) (*grad)[i] = static_cast<float>(2.0 * d / static_cast<double>(n));
    }
    return static_cast<float>(acc / static_cast<double>(n));
}

float l1_loss(const Tensor& pred, const Tensor& target, Tensor* grad) {
    if (!pred.same_shape(target)) throw std::runtime_error("l1_loss: shape mismatch");
    const int64_t n = pred.numel();
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double d = pred[i] - target[i];
        acc += std::abs(d);
        if (grad) (*grad)[i] = static_cast<float>((d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0)) /
                                                  static_cast<double>(n));
    }
    return static_cast<float>(acc / static_cast<double>(n));
}

float seg_loss(const Tensor& scores, const Tensor& target_mask, Tensor* grad) {
    if (scores.ndim() != 4 || scores.dim(1) != 2)
        throw std::runtime_error("seg_loss: scores must be [N,2,H,W]");
    const int n = scores.dim(0), h = scores.dim(2), w = scores.dim(3);
    const int64_t hw = int64_t(h) * w;
    if (grad) grad->fill(0.0f);

    double total = 0.0;
    const double smooth = 1.0;
    for (int s = 0; s < n; ++s) {
        const float* s0 = scores.data() + (int64_t(s) * 2 + 0) * hw;
        const float* s1 = scores.data() + (int64_t(s) * 2 + 1) * hw;
        const float* t = target_mask.data() + int64_t(s) * hw;

        std::vector<double> p1(static_cast<size_t>(hw));
        double ce = 0.0, inter = 0.0, psum = 0.0, tsum = 0.0;
        for (int64_t i = 0; i < hw; ++i) {
            const double z = static_cast<double>(s1[i]) - static_cast<double>(s0[i]);
            const double p = 1.0 / (1.0 + std::exp(-z));
            p1[static_cast<size_t>(i)] = p;
            const double ti = t[i];
            const double pt = ti > 0.5 ? p : 1.0 - p;
            ce -= std::log(std::max(pt, 1e-12));
            inter += p * ti;
            psum += p;
            tsum += ti;
        }
        ce /= static_cast<double>(hw);
        const double denom = psum + tsum + smooth;
        const double dice = 1.0 - (2.0 * inter + smooth) / denom;
        total += ce + dice;

        if (grad) {
            float* g0 = grad->data() + (int64_t(s) * 2 + 0) * hw;
            float* g1 = grad->data() + (int64_t(s) * 2 + 1) * hw;
            for (int64_t i = 0; i < hw; ++i) {
                const double p = p1[static_cast<size_t>(i)];
                const double ti = t[i];
                // cross-entropy (through the 2-class softmax)
                double g = (p - ti) / static_cast<double>(hw);
                // dice, chained through dp/dz = p(1-p)
                const double ddice_dp =
                    -(2.0 * ti * denom - (2.0 * inter + smooth)) / (denom * denom);
                g += ddice_dp * p * (1.0 - p);
                g /= static_cast<double>(n);
                g1[i] += static_cast<float>(g);
                g0[i] -= static_cast<float>(g);
            }
        }
    }
    return static_cast<float>(total / static_cast<double>(n));
}

}  // namespace folds::nn
