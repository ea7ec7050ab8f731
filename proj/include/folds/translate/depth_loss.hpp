#pragma once

#include <cstdint>

#include "folds/core/tensor.hpp"

namespace folds::translate {

// Scale-invariant log-depth loss over the n masked-in pixels:
//   (1/n) sum_i (log d_i - log d*_i)^2  -  (1/(2 n^2)) (sum_i (log d_i - log d*_i))^2
// Zero iff d == d* on the mask; a constant scale c contributes (log c)^2 / 2.
// mask may be null (all pixels valid); nonzero mask bytes mark valid pixels.
// Throws on an empty mask or nonpositive depth inside the mask.
double depth_log_loss(const float* d, const float* d_star, const uint8_t* mask, int64_t n);

// Same value, and writes dL/dd into grad (zero outside the mask).
double depth_log_loss_grad(const float* d, const float* d_star, const uint8_t* mask, int64_t n,
                           float* grad);

// Tensor convenience wrappers; shapes must match.
double depth_log_loss(const Tensor& d, const Tensor& d_star, const Tensor* mask = nullptr);
double depth_log_loss_grad(const Tensor& d, const Tensor& d_star, const Tensor* mask,
                           Tensor* grad);

}  // namespace folds::translate
