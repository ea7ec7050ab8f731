#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "folds/core/image.hpp"
#include "folds/core/tensor.hpp"

namespace folds {

// 8-bit interleaved image -> [1,C,H,W] tensor in [-1, 1].
inline Tensor tensor_from_u8(const ImageU8& img) {
    Tensor t({1, img.channels, img.height, img.width});
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                t.at(0, c, y, x) = static_cast<float>(img.at(x, y, c)) / 127.5f - 1.0f;
    return t;
}

// [1,C,H,W] tensor in [-1, 1] -> 8-bit interleaved image.
inline ImageU8 u8_from_tensor(const Tensor& t) {
    if (t.ndim() != 4 || t.dim(0) != 1) throw std::runtime_error("u8_from_tensor: want [1,C,H,W]");
    ImageU8 img(t.dim(3), t.dim(2), t.dim(1));
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                const float v = std::clamp((t.at(0, c, y, x) + 1.0f) * 127.5f, 0.0f, 255.0f);
                img.at(x, y, c) = static_cast<uint8_t>(std::lround(v));
            }
    return img;
}

// float raster (e.g. depth PFM) -> [1,1,H,W] tensor, values copied verbatim.
inline Tensor tensor_from_raster(const ImageF& img) {
    Tensor t({1, img.channels, img.height, img.width});
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) t.at(0, c, y, x) = img.at(x, y, c);
    return t;
}

}  // namespace folds
