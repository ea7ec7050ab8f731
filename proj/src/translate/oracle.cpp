#include "folds/translate/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace folds::translate {
namespace {

constexpr float kLumEps = 1e-4f;  // luminance floor before the inverse sqrt

class LuminanceStub : public DepthOracle {
public:
    std::string id() const override { return "stub"; }

    Tensor predict(const Tensor& img) override {
        if (img.ndim() != 4) throw std::runtime_error("oracle: want [N,C,H,W]");
        last_input_shape_ = img.shape();
        const int n = img.dim(0), c = img.dim(1), h = img.dim(2), w = img.dim(3);
        const int64_t hw = int64_t(h) * w;
        Tensor depth({n, 1, h, w});
        clamped_.assign(static_cast<size_t>(n) * hw, 0);
        lum_.assign(static_cast<size_t>(n) * hw, 0.0f);
        for (int s = 0; s < n; ++s) {
            for (int64_t i = 0; i < hw; ++i) {
                float acc = 0.0f;
                for (int ch = 0; ch < c; ++ch)
                    acc += (img.data()[(int64_t(s) * c + ch) * hw + i] + 1.0f) * 0.5f;
                float lum = acc / static_cast<float>(c);
                const size_t k = static_cast<size_t>(s) * hw + static_cast<size_t>(i);
                if (lum < kLumEps) {
                    lum = kLumEps;
                    clamped_[k] = 1;
                }
                lum_[k] = lum;
                depth.data()[int64_t(s) * hw + i] = 1.0f / std::sqrt(lum);
            }
        }
        return depth;
    }

    Tensor backward(const Tensor& grad_depth) override {
        const int n = last_input_shape_[0], c = last_input_shape_[1];
        const int64_t hw = int64_t(last_input_shape_[2]) * last_input_shape_[3];
        Tensor grad_img(last_input_shape_);
        for (int s = 0; s < n; ++s) {
            for (int64_t i = 0; i < hw; ++i) {
                const size_t k = static_cast<size_t>(s) * hw + static_cast<size_t>(i);
                if (clamped_[k]) continue;  // flat region of the clamp
                const float lum = lum_[k];
                // d = lum^(-1/2); dd/dlum = -1/2 lum^(-3/2); dlum/dx_ch = 1/(2c)
                const float g = grad_depth.data()[int64_t(s) * hw + i] *
                                (-0.5f / (lum * std::sqrt(lum))) / (2.0f * c);
                for (int ch = 0; ch < c; ++ch)
                    grad_img.data()[(int64_t(s) * c + ch) * hw + i] = g;
            }
        }
        return grad_img;
    }

private:
    std::vector<int> last_input_shape_;
    std::vector<uint8_t> clamped_;
    std::vector<float> lum_;
};

}  // namespace

std::unique_ptr<DepthOracle> make_luminance_stub() { return std::make_unique<LuminanceStub>(); }

std::unique_ptr<DepthOracle> make_oracle(const std::string& id) {
    if (id == "stub") return make_luminance_stub();
    throw std::runtime_error("unknown depth oracle '" + id +
                             "' (external pretrained oracles are ingested, not built; use 'stub')");
}

}  // namespace folds::translate
