#include "folds/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "folds/core/kernels.hpp"

namespace folds::nn {
namespace {

// C[MxN] += A[MxK] * (B[NxK])^T
void gemm_nt(int m, int n, int k, const float* a, const float* b, float* c) {
    const auto& ops = kernels::active();
    for (int i = 0; i < m; ++i) {
        const float* arow = a + int64_t(i) * k;
        float* crow = c + int64_t(i) * n;
        for (int j = 0; j < n; ++j) crow[j] += ops.dot(arow, b + int64_t(j) * k, k);
    }
}

// C[KxN] += (A[MxK])^T * B[MxN]
void gemm_tn(int m, int n, int k, const float* a, const float* b, float* c) {
    const auto& ops = kernels::active();
    for (int p = 0; p < m; ++p) {
        const float* arow = a + int64_t(p) * k;
        const float* brow = b + int64_t(p) * n;
        for (int i = 0; i < k; ++i)
            if (arow[i] != 0.0f) ops.axpy(arow[i], brow, c + int64_t(i) * n, n);
    }
}

void im2col(const float* img, int ch, int h, int w, int kernel, int stride, int pad,
            float* cols) {
    const int oh = (h + 2 * pad - kernel) / stride + 1;
    const int ow = (w + 2 * pad - kernel) / stride + 1;
    const int64_t plane = int64_t(oh) * ow;
    for (int c = 0; c < ch; ++c) {
        const float* src = img + int64_t(c) * h * w;
        for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
                float* dst = cols + ((int64_t(c) * kernel + ky) * kernel + kx) * plane;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= h) {
                        for (int ox = 0; ox < ow; ++ox) dst[int64_t(oy) * ow + ox] = 0.0f;
                        continue;
                    }
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        dst[int64_t(oy) * ow + ox] =
                            (ix >= 0 && ix < w) ? src[int64_t(iy) * w + ix] : 0.0f;
                    }
                }
            }
        }
    }
}

void col2im(const float* cols, int ch, int h, int w, int kernel, int stride, int pad,
            float* img) {
    const int oh = (h + 2 * pad - kernel) / stride + 1;
    const int ow = (w + 2 * pad - kernel) / stride + 1;
    const int64_t plane = int64_t(oh) * ow;
    for (int c = 0; c < ch; ++c) {
        float* dst = img + int64_t(c) * h * w;
        for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
                const float* src = cols + ((int64_t(c) * kernel + ky) * kernel + kx) * plane;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= h) continue;
                    for (int ox = 0; ox < ow; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        if (ix >= 0 && ix < w) dst[int64_t(iy) * w + ix] += src[int64_t(oy) * ow + ox];
                    }
                }
            }
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      kernel_(kernel),
      stride_(stride),
      pad_(pad),
      weight_(name + ".weight", {out_ch, in_ch * kernel * kernel}),
      bias_(name + ".bias", {out_ch}) {}

void Conv2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
}

void Conv2d::init(Rng& rng) {
    for (int64_t i = 0; i < weight_.value.numel(); ++i)
        weight_.value[i] = static_cast<float>(rng.normal() * 0.02);
    bias_.value.fill(0.0f);
}

Tensor Conv2d::forward(const Tensor& x) {
    if (x.ndim() != 4 || x.dim(1) != in_ch_) throw std::runtime_error("Conv2d: bad input shape");
    cached_input_ = x;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int oh = out_size(h), ow = out_size(w);
    const int k = in_ch_ * kernel_ * kernel_;
    Tensor y({n, out_ch_, oh, ow});
    std::vector<float> cols(static_cast<size_t>(k) * oh * ow);
    for (int s = 0; s < n; ++s) {
        im2col(x.data() + int64_t(s) * in_ch_ * h * w, in_ch_, h, w, kernel_, stride_, pad_,
               cols.data());
        float* ydat = y.data() + int64_t(s) * out_ch_ * oh * ow;
        for (int c = 0; c < out_ch_; ++c) {
            float* plane = ydat + int64_t(c) * oh * ow;
            const float b = bias_.value[c];
            for (int64_t i = 0; i < int64_t(oh) * ow; ++i) plane[i] = b;
        }
        kernels::active().gemm(out_ch_, oh * ow, k, weight_.value.data(), cols.data(), ydat);
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& grad_out, bool accumulate) {
    const Tensor& x = cached_input_;
    const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const int oh = out_size(h), ow = out_size(w);
    const int k = in_ch_ * kernel_ * kernel_;
    const int64_t plane = int64_t(oh) * ow;
    Tensor gx(x.shape());
    std::vector<float> cols(static_cast<size_t>(k) * plane);
    std::vector<float> gcols(static_cast<size_t>(k) * plane);
    for (int s = 0; s < n; ++s) {
        const float* gy = grad_out.data() + int64_t(s) * out_ch_ * plane;
        if (accumulate) {
            im2col(x.data() + int64_t(s) * in_ch_ * h * w, in_ch_, h, w, kernel_, stride_, pad_,
                   cols.data());
            gemm_nt(out_ch_, k, static_cast<int>(plane), gy, cols.data(), weight_.grad.data());
            for (int c = 0; c < out_ch_; ++c)
                bias_.grad[c] += kernels::active().sum(gy + int64_t(c) * plane, plane);
        }
        std::fill(gcols.begin(), gcols.end(), 0.0f);
        gemm_tn(out_ch_, static_cast<int>(plane), k, weight_.value.data(), gy, gcols.data());
        col2im(gcols.data(), in_ch_, h, w, kernel_, stride_, pad_,
               gx.data() + int64_t(s) * in_ch_ * h * w);
    }
    return gx;
}

// ---------------------------------------------------------------- InstanceNorm2d

InstanceNorm2d::InstanceNorm2d(std::string name, int channels, float eps)
    : channels_(channels),
      eps_(eps),
      gamma_(name + ".gamma", {channels}),
      beta_(name + ".beta", {channels}) {}

void InstanceNorm2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
}

void InstanceNorm2d::init(Rng&) {
    gamma_.value.fill(1.0f);
    beta_.value.fill(0.0f);
}

Tensor InstanceNorm2d::forward(const Tensor& x) {
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int64_t hw = int64_t(h) * w;
    Tensor y(x.shape());
    xhat_ = Tensor(x.shape());
    inv_std_.assign(static_cast<size_t>(n) * c, 0.0f);
    for (int s = 0; s < n; ++s) {
        for (int ch = 0; ch < c; ++ch) {
            const float* src = x.data() + (int64_t(s) * c + ch) * hw;
            float mean = kernels::active().sum(src, hw) / static_cast<float>(hw);
            float var = 0.0f;
            for (int64_t i = 0; i < hw; ++i) {
                float d = src[i] - mean;
                var += d * d;
            }
            var /= static_cast<float>(hw);
            float istd = 1.0f / std::sqrt(var + eps_);
            inv_std_[static_cast<size_t>(s) * c + ch] = istd;
            float* xh = xhat_.data() + (int64_t(s) * c + ch) * hw;
            float* dst = y.data() + (int64_t(s) * c + ch) * hw;
            const float g = gamma_.value[ch], b = beta_.value[ch];
            for (int64_t i = 0; i < hw; ++i) {
                xh[i] = (src[i] - mean) * istd;
                dst[i] = g * xh[i] + b;
            }
        }
    }
    return y;
}

Tensor InstanceNorm2d::backward(const Tensor& grad_out, bool accumulate) {
    const int n = grad_out.dim(0), c = grad_out.dim(1), h = grad_out.dim(2), w = grad_out.dim(3);
    const int64_t hw = int64_t(h) * w;
    Tensor gx(grad_out.shape());
    for (int s = 0; s < n; ++s) {
        for (int ch = 0; ch < c; ++ch) {
            const float* gy = grad_out.data() + (int64_t(s) * c + ch) * hw;
            const float* xh = xhat_.data() + (int64_t(s) * c + ch) * hw;
            float* dst = gx.data() + (int64_t(s) * c + ch) * hw;
            const float g = gamma_.value[ch];
            const float istd = inv_std_[static_cast<size_t>(s) * c + ch];
            float sum_gy = 0.0f, sum_gy_xh = 0.0f;
            for (int64_t i = 0; i < hw; ++i) {
                sum_gy += gy[i];
                sum_gy_xh += gy[i] * xh[i];
            }
            if (accumulate) {
                gamma_.grad[ch] += sum_gy_xh;
                beta_.grad[ch] += sum_gy;
            }
            const float inv_hw = 1.0f / static_cast<float>(hw);
            for (int64_t i = 0; i < hw; ++i)
                dst[i] = g * istd * (gy[i] - inv_hw * sum_gy - xh[i] * inv_hw * sum_gy_xh);
        }
    }
    return gx;
}

// ---------------------------------------------------------------- activations

Tensor ReLU::forward(const Tensor& x) {
    cached_input_ = x;
    Tensor y(x.shape());
    for (int64_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
    return y;
}

Tensor ReLU::backward(const Tensor& grad_out, bool) {
    Tensor gx(grad_out.shape());
    for (int64_t i = 0; i < grad_out.numel(); ++i)
        gx[i] = cached_input_[i] > 0.0f ? grad_out[i] : 0.0f;
    return gx;
}

Tensor LeakyReLU::forward(const Tensor& x) {
    cached_input_ = x;
    Tensor y(x.shape());
    for (int64_t i = 0; i < x.numel(); ++i) y[i] = x[i] > 0.0f ? x[i] : slope_ * x[i];
    return y;
}

Tensor LeakyReLU::backward(const Tensor& grad_out, bool) {
    Tensor gx(grad_out.shape());
    for (int64_t i = 0; i < grad_out.numel(); ++i)
        gx[i] = cached_input_[i] > 0.0f ? grad_out[i] : slope_ * grad_out[i];
    return gx;
}

Tensor Tanh::forward(const Tensor& x) {
    Tensor y(x.shape());
    for (int64_t i = 0; i < x.numel(); ++i) y[i] = std::tanh(x[i]);
    cached_output_ = y;
    return y;
}

Tensor Tanh::backward(const Tensor& grad_out, bool) {
    Tensor gx(grad_out.shape());
    for (int64_t i = 0; i < grad_out.numel(); ++i) {
        float t = cached_output_[i];
        gx[i] = grad_out[i] * (1.0f - t * t);
    }
    return gx;
}

// ---------------------------------------------------------------- Upsample2x

Tensor Upsample2x::forward(const Tensor& x) {
    in_shape_ = x.shape();
    const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    Tensor y({n, c, 2 * h, 2 * w});
    for (int s = 0; s < n; ++s)
        for (int ch = 0; ch < c; ++ch)
            for (int yy = 0; yy < 2 * h; ++yy)
                for (int xx = 0; xx < 2 * w; ++xx)
                    y.at(s, ch, yy, xx) = x.at(s, ch, yy / 2, xx / 2);
    return y;
}

Tensor Upsample2x::backward(const Tensor& grad_out, bool) {
    const int n = in_shape_[0], c = in_shape_[1], h = in_shape_[2], w = in_shape_[3];
    Tensor gx(in_shape_);
    for (int s = 0; s < n; ++s)
        for (int ch = 0; ch < c; ++ch)
            for (int yy = 0; yy < 2 * h; ++yy)
                for (int xx = 0; xx < 2 * w; ++xx)
                    gx.at(s, ch, yy / 2, xx / 2) += grad_out.at(s, ch, yy, xx);
    return gx;
}

// ---------------------------------------------------------------- composites

Tensor Sequential::forward(const Tensor& x) {
    Tensor cur = x;
    for (auto& m : mods_) cur = m->forward(cur);
    return cur;
}

Tensor Sequential::backward(const Tensor& grad_out, bool accumulate) {
    Tensor cur = grad_out;
    for (auto it = mods_.rbegin(); it != mods_.rend(); ++it)
        cur = (*it)->backward(cur, accumulate);
    return cur;
}

void Sequential::collect_params(std::vector<Param*>& out) {
    for (auto& m : mods_) m->collect_params(out);
}

void Sequential::init(Rng& rng) {
    for (auto& m : mods_) m->init(rng);
}

Tensor Residual::forward(const Tensor& x) {
    Tensor y = body_->forward(x);
    if (!y.same_shape(x)) throw std::runtime_error("Residual: body changed shape");
    for (int64_t i = 0; i < y.numel(); ++i) y[i] += x[i];
    return y;
}

Tensor Residual::backward(const Tensor& grad_out, bool accumulate) {
    Tensor gx = body_->backward(grad_out, accumulate);
    for (int64_t i = 0; i < gx.numel(); ++i) gx[i] += grad_out[i];
    return gx;
}

void Residual::collect_params(std::vector<Param*>& out) { body_->collect_params(out); }
void Residual::init(Rng& rng) { body_->init(rng); }

}  // namespace folds::nn
