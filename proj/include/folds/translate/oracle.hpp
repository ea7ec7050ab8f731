#pragma once

#include <memory>
#include <string>

#include "folds/core/tensor.hpp"

namespace folds::translate {

// Frozen monocular depth predictor. predict() must be deterministic and is
// never updated during training; backward() is the vector-Jacobian product
// for the most recent predict() input.
class DepthOracle {
public:
    virtual ~DepthOracle() = default;
    virtual std::string id() const = 0;
    // img: [N,C,H,W] in [-1,1] -> depth [N,1,H,W], strictly positive
    virtual Tensor predict(const Tensor& img) = 0;
    virtual Tensor backward(const Tensor& grad_depth) = 0;
};

// Analytic stub matching the renderer's headlight shading: luminance
// I = (d_min/d)^2 inverts to relative depth d = 1/sqrt(I). Differentiable,
// which lets the depth-consistency term be tested end to end without a
// pretrained network.
std::unique_ptr<DepthOracle> make_luminance_stub();

// "stub" -> luminance stub. Anything else is rejected: external pretrained
// oracles are out of scope here and exist only as provenance ids.
std::unique_ptr<DepthOracle> make_oracle(const std::string& id);

}  // namespace folds::translate
