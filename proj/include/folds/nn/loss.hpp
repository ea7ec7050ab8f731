#pragma once

#include "folds/core/tensor.hpp"

namespace folds::nn {

// Each returns the scalar loss and writes d(loss)/d(pred) into grad
// (same shape as pred). Losses are means over all elements.

float mse_loss(const Tensor& pred, float target, Tensor* grad);
float l1_loss(const Tensor& pred, const Tensor& target, Tensor* grad);

// 2-class per-pixel loss: equal-weight sum of softmax cross-entropy and a
// soft-overlap (Dice) term on the foreground channel.
// scores: [N,2,H,W]; target_mask: [N,1,H,W] in {0,1}.
float seg_loss(const Tensor& scores, const Tensor& target_mask, Tensor* grad);

}  // namespace folds::nn
