#pragma once

#include <cstdint>

namespace folds::kernels {

// Arithmetic kernel table. One scalar reference implementation plus an AVX2
// variant, selected once at startup from CPU capabilities. SIMD results may
// differ from scalar in the last bits (different summation order); the
// equivalence tests bound that difference.
struct Ops {
    const char* name;

    // C[MxN] += A[MxK] * B[KxN], all row-major.
    void (*gemm)(int m, int n, int k, const float* a, const float* b, float* c);
    float (*dot)(const float* x, const float* y, int64_t n);
    // y += alpha * x
    void (*axpy)(float alpha, const float* x, float* y, int64_t n);
    // out = x + y
    void (*add)(const float* x, const float* y, float* out, int64_t n);
    // out = x * y
    void (*mul)(const float* x, const float* y, float* out, int64_t n);
    void (*scale)(float alpha, float* x, int64_t n);
    float (*sum)(const float* x, int64_t n);
    float (*sumsq)(const float* x, int64_t n);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when the CPU lacks AVX2+FMA

// Active table. Defaults to the best available variant.
const Ops& active();

// Override for tests/benchmarks: "scalar", "avx2" or "auto".
// Returns false if the requested variant is unavailable.
bool select(const char* name);

}  // namespace folds::kernels
