#include "folds/translate/depth_loss.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace folds::translate {
namespace {

struct LogDiffs {
    std::vector<double> delta;  // log d - log d*, masked-in pixels only
    std::vector<int64_t> index;
    double sum = 0.0;
    double sumsq = 0.0;
};

LogDiffs collect(const float* d, const float* d_star, const uint8_t* mask, int64_t n) {
    LogDiffs out;
    for (int64_t i = 0; i < n; ++i) {
        if (mask && !mask[i]) continue;
        if (!(d[i] > 0.0f) || !(d_star[i] > 0.0f))
            throw std::invalid_argument("depth_log_loss: nonpositive depth inside the mask");
        const double delta = std::log(static_cast<double>(d[i])) -
                             std::log(static_cast<double>(d_star[i]));
        out.delta.push_back(delta);
        out.index.push_back(i);
        out.sum += delta;
        out.sumsq += delta * delta;
    }
    if (out.delta.empty()) throw std::invalid_argument("depth_log_loss: empty mask");
    return out;
}

double value_of(const LogDiffs& ld) {
    const double m = static_cast<double>(ld.delta.size());
    return ld.sumsq / m - (ld.sum * ld.sum) / (2.0 * m * m);
}

}  // namespace

double depth_log_loss(const float* d, const float* d_star, const uint8_t* mask, int64_t n) {
    return value_of(collect(d, d_star, mask, n));
}

double depth_log_loss_grad(const float* d, const float* d_star, const uint8_t* mask, int64_t n,
                           float* grad) {
    const LogDiffs ld = collect(d, d_star, mask, n);
    const double m = static_cast<double>(ld.delta.size());
    for (int64_t i = 0; i < n; ++i) grad[i] = 0.0f;
    // dL/ddelta_i = 2 delta_i / m - sum / m^2 ; ddelta_i/dd_i = 1/d_i
    for (size_t k = 0; k < ld.delta.size(); ++k) {
        const int64_t i = ld.index[k];
        const double g = (2.0 * ld.delta[k] / m - ld.sum / (m * m)) / static_cast<double>(d[i]);
        grad[i] = static_cast<float>(g);
    }
    return value_of(ld);
}

double depth_log_loss(const Tensor& d, const Tensor& d_star, const Tensor* mask) {
    if (!d.same_shape(d_star)) throw std::invalid_argument("depth_log_loss: shape mismatch");
    std::vector<uint8_t> m;
    if (mask) {
        if (!mask->same_shape(d)) throw std::invalid_argument("depth_log_loss: mask shape mismatch");
        m.resize(static_cast<size_t>(d.numel()));
        for (int64_t i = 0; i < d.numel(); ++i) m[static_cast<size_t>(i)] = (*mask)[i] != 0.0f;
    }
    return depth_log_loss(d.data(), d_star.data(), mask ? m.data() : nullptr, d.numel());
}

double depth_log_loss_grad(const Tensor& d, const Tensor& d_star, const Tensor* mask,
                           Tensor* grad) {
    if (!d.same_shape(d_star)) throw std::invalid_argument("depth_log_loss: shape mismatch");
    std::vector<uint8_t> m;
    if (mask) {
        if (!mask->same_shape(d)) throw std::invalid_argument("depth_log_loss: mask shape mismatch");
        m.resize(static_cast<size_t>(d.numel()));
        for (int64_t i = 0; i < d.numel(); ++i) m[static_cast<size_t>(i)] = (*mask)[i] != 0.0f;
    }
    return depth_log_loss_grad(d.data(), d_star.data(), mask ? m.data() : nullptr, d.numel(),
                               grad->data());
}

}  // namespace folds::translate
