#include "folds/core/kernels.hpp"

namespace folds::kernels {
namespace {

void gemm_scalar(int m, int n, int k, const float* a, const float* b, float* c) {
    for (int i = 0; i < m; ++i) {
        const float* arow = a + int64_t(i) * k;
        float* crow = c + int64_t(i) * n;
        for (int p = 0; p < k; ++p) {
            float av = arow[p];
            if (av == 0.0f) continue;
            const float* brow = b + int64_t(p) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

float dot_scalar(const float* x, const float* y, int64_t n) {
    float s = 0.0f;
    for (int64_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(float alpha, const float* x, float* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scalar(const float* x, const float* y, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void mul_scalar(const float* x, const float* y, float* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_scalar(float alpha, float* x, int64_t n) {
    for (int64_t i = 0; i < n; ++i) x[i] *= alpha;
}

float sum_scalar(const float* x, int64_t n) {
    float s = 0.0f;
    for (int64_t i = 0; i < n; ++i) s += x[i];
    return s;
}

float sumsq_scalar(const float* x, int64_t n) {
    float s = 0.0f;
    for (int64_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",   gemm_scalar, dot_scalar, axpy_scalar,
        add_scalar, mul_scalar,  scale_scalar, sum_scalar, sumsq_scalar,
    };
    return ops;
}

}  // namespace folds::kernels
