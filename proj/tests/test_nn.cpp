#include <doctest.h>

#include "folds/nn/layers.hpp"
#include "folds/nn/loss.hpp"
#include "folds/nn/optim.hpp"
#include "helpers.hpp"

using namespace folds;

namespace {

Tensor random_tensor(Rng& rng, std::vector<int> shape, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (int64_t i = 0; i < t.numel(); ++i) t[i] = static_cast<float>(rng.normal() * scale);
    return t;
}

// loss = sum(w . module(x)); checks input grad and every parameter grad
// against central differences.
void module_gradcheck(nn::Module& mod, const std::vector<int>& in_shape, uint64_t seed,
                      double tol = 2e-2, double min_abs = 0.0) {
    Rng rng(seed);
    mod.init(rng);
    Tensor x = random_tensor(rng, in_shape);
    // keep inputs away from piecewise-linear kinks so central differences
    // stay informative
    if (min_abs > 0.0)
        for (int64_t i = 0; i < x.numel(); ++i)
            if (std::abs(x[i]) < min_abs) x[i] = x[i] < 0 ? -float(min_abs) : float(min_abs);
    Tensor probe_out = mod.forward(x);
    Tensor w = random_tensor(rng, probe_out.shape());

    auto loss_at = [&](const Tensor& input) {
        Tensor out = mod.forward(input);
        double s = 0.0;
        for (int64_t i = 0; i < out.numel(); ++i) s += double(w[i]) * out[i];
        return s;
    };

    nn::zero_grads(nn::parameters(mod));
    mod.forward(x);
    Tensor gx = mod.backward(w, true);
    CHECK(testing::gradcheck(loss_at, x, gx, 1e-2) < tol);

    for (nn::Param* p : nn::parameters(mod)) {
        Tensor analytic = p->grad;
        auto loss_at_param = [&](const Tensor& pv) {
            Tensor saved = p->value;
            p->value = pv;
            const double s = loss_at(x);
            p->value = saved;
            return s;
        };
        const double worst = testing::gradcheck(loss_at_param, p->value, analytic, 1e-2);
        INFO("param ", p->name);
        CHECK(worst < tol);
    }
}

}  // namespace

TEST_CASE("conv2d gradients") {
    nn::Conv2d conv("c", 2, 3, 3, 1, 1);
    module_gradcheck(conv, {1, 2, 5, 5}, 11);
    nn::Conv2d strided("s", 2, 2, 4, 2, 1);
    module_gradcheck(strided, {1, 2, 8, 8}, 12);
}

TEST_CASE("conv2d output size") {
    nn::Conv2d conv("c", 1, 1, 4, 2, 1);
    Rng rng(0);
    conv.init(rng);
    Tensor y = conv.forward(Tensor({1, 1, 16, 16}));
    CHECK(y.dim(2) == 8);
    CHECK(y.dim(3) == 8);
}

TEST_CASE("instance norm gradients and statistics") {
    nn::InstanceNorm2d norm("n", 3);
    module_gradcheck(norm, {2, 3, 4, 4}, 13);

    Rng rng(1);
    nn::InstanceNorm2d n2("n2", 2);
    n2.init(rng);
    Tensor x = random_tensor(rng, {1, 2, 6, 6}, 3.0);
    Tensor y = n2.forward(x);
    for (int c = 0; c < 2; ++c) {
        double mean = 0.0, var = 0.0;
        for (int i = 0; i < 36; ++i) mean += y.at(0, c, i / 6, i % 6);
        mean /= 36.0;
        for (int i = 0; i < 36; ++i) {
            const double d = y.at(0, c, i / 6, i % 6) - mean;
            var += d * d;
        }
        CHECK(std::abs(mean) < 1e-5);
        CHECK(std::abs(var / 36.0 - 1.0) < 1e-3);
    }
}

TEST_CASE("activation gradients") {
    nn::ReLU relu;
    module_gradcheck(relu, {1, 2, 3, 3}, 14, 2e-2, 0.1);
    nn::LeakyReLU lrelu(0.2f);
    module_gradcheck(lrelu, {1, 2, 3, 3}, 15, 2e-2, 0.1);
    nn::Tanh tanh_mod;
    module_gradcheck(tanh_mod, {1, 2, 3, 3}, 16);
}

TEST_CASE("upsample, sequential and residual gradients") {
    nn::Upsample2x up;
    module_gradcheck(up, {1, 2, 3, 3}, 17);

    // smooth stack only: normalization layers make single-weight perturbations
    // nearly invisible, which starves central differences of signal
    auto seq = std::make_unique<nn::Sequential>();
    seq->add(std::make_unique<nn::Conv2d>("c1", 2, 4, 3, 1, 1));
    seq->add(std::make_unique<nn::Tanh>());
    seq->add(std::make_unique<nn::Conv2d>("c2", 4, 2, 3, 1, 1));
    module_gradcheck(*seq, {1, 2, 5, 5}, 18, 4e-2);

    auto body = std::make_unique<nn::Sequential>();
    body->add(std::make_unique<nn::Conv2d>("rc", 2, 2, 3, 1, 1));
    body->add(std::make_unique<nn::Tanh>());
    nn::Residual res(std::move(body));
    module_gradcheck(res, {1, 2, 4, 4}, 19);
}

TEST_CASE("loss gradients") {
    Rng rng(23);

    Tensor pred = random_tensor(rng, {1, 2, 4, 4});
    Tensor grad(pred.shape());
    nn::mse_loss(pred, 1.0f, &grad);
    CHECK(testing::gradcheck([&](const Tensor& p) { return nn::mse_loss(p, 1.0f, nullptr); },
                             pred, grad, 1e-2) < 1e-2);

    Tensor target = random_tensor(rng, {1, 2, 4, 4});
    nn::l1_loss(pred, target, &grad);
    CHECK(testing::gradcheck([&](const Tensor& p) { return nn::l1_loss(p, target, nullptr); },
                             pred, grad, 1e-4) < 2e-2);

    Tensor scores = random_tensor(rng, {2, 2, 4, 4});
    Tensor mask({2, 1, 4, 4});
    for (int64_t i = 0; i < mask.numel(); ++i) mask[i] = rng.uniform() < 0.4 ? 1.0f : 0.0f;
    Tensor seg_grad(scores.shape());
    nn::seg_loss(scores, mask, &seg_grad);
    CHECK(testing::gradcheck([&](const Tensor& s) { return nn::seg_loss(s, mask, nullptr); },
                             scores, seg_grad, 1e-2) < 2e-2);
}

TEST_CASE("seg loss decreases toward the target") {
    Tensor mask({1, 1, 2, 2});
    mask[0] = 1.0f;
    Tensor good({1, 2, 2, 2});
    Tensor bad({1, 2, 2, 2});
    for (int i = 0; i < 4; ++i) {
        const bool fg = mask[i] > 0.5f;
        good.at(0, 1, i / 2, i % 2) = fg ? 5.0f : -5.0f;
        good.at(0, 0, i / 2, i % 2) = fg ? -5.0f : 5.0f;
        bad.at(0, 1, i / 2, i % 2) = fg ? -5.0f : 5.0f;
        bad.at(0, 0, i / 2, i % 2) = fg ? 5.0f : -5.0f;
    }
    CHECK(nn::seg_loss(good, mask, nullptr) < nn::seg_loss(bad, mask, nullptr));
}

TEST_CASE("optimizers move parameters downhill") {
    // minimize (v - 3)^2 elementwise
    auto run = [&](auto&& make_opt) {
        nn::Param p("v", {4});
        auto opt = make_opt(std::vector<nn::Param*>{&p});
        for (int i = 0; i < 400; ++i) {
            for (int64_t k = 0; k < 4; ++k) p.grad[k] = 2.0f * (p.value[k] - 3.0f);
            opt.step();
            opt.zero_grad();
        }
        for (int64_t k = 0; k < 4; ++k) CHECK(std::abs(p.value[k] - 3.0f) < 1e-2);
    };
    run([](std::vector<nn::Param*> p) { return nn::Adam(std::move(p), 0.1f); });
    run([](std::vector<nn::Param*> p) { return nn::Sgd(std::move(p), 0.05f); });
}

TEST_CASE("cosine schedule endpoints") {
    CHECK(nn::cosine_lr(0.01f, 0, 100) == doctest::Approx(0.01f));
    CHECK(nn::cosine_lr(0.01f, 50, 100) == doctest::Approx(0.005f));
    CHECK(nn::cosine_lr(0.01f, 100, 100) == doctest::Approx(0.0f));
}
