#pragma once

#include <memory>
#include <string>
#include <vector>

#include "folds/core/rng.hpp"
#include "folds/core/tensor.hpp"

namespace folds::nn {

struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    explicit Param(std::string n, std::vector<int> shape)
        : name(std::move(n)), value(shape), grad(std::move(shape)) {}
};

// A differentiable map. forward() caches whatever backward() needs, so each
// backward() must follow the matching forward() before the module is reused.
// `accumulate` controls whether parameter gradients are added (false = the
// module is only a conduit for input gradients, e.g. a frozen discriminator
// inside a generator update).
class Module {
public:
    virtual ~Module() = default;
    virtual Tensor forward(const Tensor& x) = 0;
    virtual Tensor backward(const Tensor& grad_out, bool accumulate = true) = 0;
    virtual void collect_params(std::vector<Param*>& out) {}
    virtual void init(Rng& rng) {}
};

using ModulePtr = std::unique_ptr<Module>;

inline std::vector<Param*> parameters(Module& m) {
    std::vector<Param*> out;
    m.collect_params(out);
    return out;
}

inline void zero_grads(const std::vector<Param*>& params) {
    for (Param* p : params) p->grad.fill(0.0f);
}

inline int64_t param_count(const std::vector<Param*>& params) {
    int64_t n = 0;
    for (Param* p : params) n += p->value.numel();
    return n;
}

}  // namespace folds::nn
