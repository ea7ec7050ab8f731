#include "folds/translate/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "folds/core/convert.hpp"
#include "folds/core/image.hpp"
#include "folds/core/kernels.hpp"
#include "folds/nn/loss.hpp"
#include "folds/translate/depth_loss.hpp"

namespace fs = std::filesystem;

namespace folds::translate {

TranslateTrainData load_translate_data(const data::DatasetManifest& sim,
                                       const data::DatasetManifest& real, int image_size,
                                       bool with_depth) {
    TranslateTrainData out;
    auto load_rgb = [&](const data::DatasetManifest& m, const data::FrameRecord& f) {
        ImageU8 img = io::read_png(m.resolve(f.rgb));
        if (img.width != image_size || img.height != image_size)
            throw std::runtime_error("frame " + f.id + " is " + std::to_string(img.width) + "x" +
                                     std::to_string(img.height) + ", training resolution is " +
                                     std::to_string(image_size));
        return tensor_from_u8(img);
    };
    for (const auto& f : sim.frames) {
        out.sim_images.push_back(load_rgb(sim, f));
        if (with_depth) {
            if (f.depth.empty())
                throw std::runtime_error("simulated frame " + f.id +
                                         " has no depth map; required when lambda_depth > 0");
            out.sim_depth.push_back(tensor_from_raster(io::read_pfm(sim.resolve(f.depth))));
        }
    }
    for (const auto& f : real.frames) out.real_images.push_back(load_rgb(real, f));
    if (out.sim_images.empty() || out.real_images.empty())
        throw std::runtime_error("translation training needs nonempty datasets on both domains");
    return out;
}

TranslationTrainer::TranslationTrainer(TranslationModel model, const TrainTranslateConfig& cfg,
                                       DepthOracle* oracle)
    : model_(std::move(model)),
      cfg_(cfg),
      oracle_(oracle),
      opt_gen_(model_.generator_params(), cfg.model.lr, cfg.model.beta1, cfg.model.beta2),
      opt_disc_(model_.discriminator_params(), cfg.model.lr, cfg.model.beta1, cfg.model.beta2),
      rng_(cfg.seed) {
    if (cfg_.model.weights.depth > 0 && !oracle_)
        throw std::runtime_error("lambda_depth > 0 requires a depth oracle");
}

double TranslationTrainer::depth_term(const Tensor& fake_y, const Tensor& gt_depth,
                                      Tensor* grad_fake_y) {
    Tensor d_pred = oracle_->predict(fake_y);
    std::vector<uint8_t> clamped(static_cast<size_t>(d_pred.numel()), 0);
    for (int64_t i = 0; i < d_pred.numel(); ++i) {
        if (!(d_pred[i] > 0.0f)) {
            d_pred[i] = 1e-6f;
            clamped[static_cast<size_t>(i)] = 1;
            ++clamp_warnings_;
        }
    }
    // pixels with sentinel (no-hit) ground truth are excluded by mask
    std::vector<uint8_t> mask(static_cast<size_t>(gt_depth.numel()));
    int64_t valid = 0;
    for (int64_t i = 0; i < gt_depth.numel(); ++i)
        valid += mask[static_cast<size_t>(i)] = gt_depth[i] > 0.0f;
    if (valid == 0) {
        // an all-background frame carries no depth supervision
        if (grad_fake_y) *grad_fake_y = Tensor(fake_y.shape());
        return 0.0;
    }

    Tensor grad_d(d_pred.shape());
    const double loss = depth_log_loss_grad(d_pred.data(), gt_depth.data(), mask.data(),
                                            d_pred.numel(), grad_d.data());
    if (grad_fake_y) {
        for (int64_t i = 0; i < grad_d.numel(); ++i)
            if (clamped[static_cast<size_t>(i)]) grad_d[i] = 0.0f;
        *grad_fake_y = oracle_->backward(grad_d);
    }
    return loss;
}

StepLosses TranslationTrainer::compute_losses(const Tensor& x, const Tensor& y,
                                              const Tensor* gt_depth) {
    StepLosses L;
    const Tensor fake_y = model_.G->forward(x);
    const Tensor rec_x = model_.F->forward(fake_y);
    L.cyc += nn::l1_loss(rec_x, x, nullptr);
    L.adv_G = nn::mse_loss(model_.Dy->forward(fake_y), 1.0f, nullptr);
    if (oracle_ && gt_depth) L.depth = depth_term(fake_y, *gt_depth, nullptr);
    L.id += nn::l1_loss(model_.G->forward(y), y, nullptr);

    const Tensor fake_x = model_.F->forward(y);
    const Tensor rec_y = model_.G->forward(fake_x);
    L.cyc += nn::l1_loss(rec_y, y, nullptr);
    L.adv_F = nn::mse_loss(model_.Dx->forward(fake_x), 1.0f, nullptr);
    L.id += nn::l1_loss(model_.F->forward(x), x, nullptr);

    Tensor py_real = model_.Dy->forward(y);
    Tensor py_fake = model_.Dy->forward(fake_y);
    L.disc_Y = 0.5 * (nn::mse_loss(py_real, 1.0f, nullptr) + nn::mse_loss(py_fake, 0.0f, nullptr));
    Tensor px_real = model_.Dx->forward(x);
    Tensor px_fake = model_.Dx->forward(fake_x);
    L.disc_X = 0.5 * (nn::mse_loss(px_real, 1.0f, nullptr) + nn::mse_loss(px_fake, 0.0f, nullptr));
    return L;
}

StepLosses TranslationTrainer::generator_update(const Tensor& x, const Tensor& y,
                                                const Tensor* gt_depth) {
    const LossWeights& w = cfg_.model.weights;
    StepLosses L;
    opt_gen_.zero_grad();

    // X -> Y branch: adversarial + cycle + depth share one G forward
    Tensor fake_y = model_.G->forward(x);

    Tensor rec_x = model_.F->forward(fake_y);
    Tensor g_rec(rec_x.shape());
    L.cyc += nn::l1_loss(rec_x, x, &g_rec);
    kernels::active().scale(w.cyc, g_rec.data(), g_rec.numel());
    Tensor grad_fy = model_.F->backward(g_rec, true);  // cycle trains F as well

    Tensor p_fake = model_.Dy->forward(fake_y);
    Tensor g_p(p_fake.shape());
    L.adv_G = nn::mse_loss(p_fake, 1.0f, &g_p);
    Tensor grad_fy_adv = model_.Dy->backward(g_p, false);
    kernels::active().axpy(w.adv, grad_fy_adv.data(), grad_fy.data(), grad_fy.numel());

    if (w.depth > 0) {
        if (!gt_depth)
            throw std::runtime_error("lambda_depth > 0 but no ground-truth depth for this frame");
        Tensor grad_fy_depth;
        L.depth = depth_term(fake_y, *gt_depth, &grad_fy_depth);
        kernels::active().axpy(w.depth, grad_fy_depth.data(), grad_fy.data(), grad_fy.numel());
    }
    model_.G->backward(grad_fy, true);

    Tensor idt_y = model_.G->forward(y);
    Tensor g_idt(idt_y.shape());
    L.id += nn::l1_loss(idt_y, y, &g_idt);
    kernels::active().scale(w.id, g_idt.data(), g_idt.numel());
    model_.G->backward(g_idt, true);

    // Y -> X branch
    Tensor fake_x = model_.F->forward(y);

    Tensor rec_y = model_.G->forward(fake_x);
    Tensor g_rec2(rec_y.shape());
    L.cyc += nn::l1_loss(rec_y, y, &g_rec2);
    kernels::active().scale(w.cyc, g_rec2.data(), g_rec2.numel());
    Tensor grad_fx = model_.G->backward(g_rec2, true);

    Tensor p_fake2 = model_.Dx->forward(fake_x);
    Tensor g_p2(p_fake2.shape());
    L.adv_F = nn::mse_loss(p_fake2, 1.0f, &g_p2);
    Tensor grad_fx_adv = model_.Dx->backward(g_p2, false);
    kernels::active().axpy(w.adv, grad_fx_adv.data(), grad_fx.data(), grad_fx.numel());
    model_.F->backward(grad_fx, true);

    Tensor idt_x = model_.F->forward(x);
    Tensor g_idt2(idt_x.shape());
    L.id += nn::l1_loss(idt_x, x, &g_idt2);
    kernels::active().scale(w.id, g_idt2.data(), g_idt2.numel());
    model_.F->backward(g_idt2, true);

    opt_gen_.step();
    last_fake_x_ = std::move(fake_x);
    last_fake_y_ = std::move(fake_y);
    return L;
}

void TranslationTrainer::discriminator_update(const Tensor& x, const Tensor& y,
                                              const Tensor& fake_x, const Tensor& fake_y,
                                              StepLosses& losses) {
    opt_disc_.zero_grad();

    // history buffers feed the fake halves
    const Tensor buf_fy = model_.pool_fake_y.query(fake_y, rng_);
    Tensor p = model_.Dy->forward(y);
    Tensor g(p.shape());
    const double ly_real = nn::mse_loss(p, 1.0f, &g);
    kernels::active().scale(0.5f, g.data(), g.numel());
    model_.Dy->backward(g, true);
    p = model_.Dy->forward(buf_fy);
    g = Tensor(p.shape());
    const double ly_fake = nn::mse_loss(p, 0.0f, &g);
    kernels::active().scale(0.5f, g.data(), g.numel());
    model_.Dy->backward(g, true);
    losses.disc_Y = 0.5 * (ly_real + ly_fake);

    const Tensor buf_fx = model_.pool_fake_x.query(fake_x, rng_);
    p = model_.Dx->forward(x);
    g = Tensor(p.shape());
    const double lx_real = nn::mse_loss(p, 1.0f, &g);
    kernels::active().scale(0.5f, g.data(), g.numel());
    model_.Dx->backward(g, true);
    p = model_.Dx->forward(buf_fx);
    g = Tensor(p.shape());
    const double lx_fake = nn::mse_loss(p, 0.0f, &g);
    kernels::active().scale(0.5f, g.data(), g.numel());
    model_.Dx->backward(g, true);
    losses.disc_X = 0.5 * (lx_real + lx_fake);

    opt_disc_.step();
}

StepLosses TranslationTrainer::step(const Tensor& x, const Tensor& y, const Tensor* gt_depth) {
    StepLosses L = generator_update(x, y, gt_depth);
    discriminator_update(x, y, last_fake_x_, last_fake_y_, L);
    ++step_count_;
    return L;
}

std::vector<StepLosses> TranslationTrainer::run(const TranslateTrainData& data) {
    const bool use_depth = cfg_.model.weights.depth > 0;
    if (use_depth && data.sim_depth.size() != data.sim_images.size())
        throw std::runtime_error("depth maps missing for some simulated frames");
    if (!cfg_.out_dir.empty()) fs::create_directories(cfg_.out_dir);

    std::vector<StepLosses> log;
    log.reserve(static_cast<size_t>(cfg_.steps));
    for (int s = 0; s < cfg_.steps; ++s) {
        const auto xi = static_cast<size_t>(rng_.below(static_cast<int64_t>(data.sim_images.size())));
        const auto yi =
            static_cast<size_t>(rng_.below(static_cast<int64_t>(data.real_images.size())));
        const Tensor* depth = use_depth ? &data.sim_depth[xi] : nullptr;
        StepLosses L = step(data.sim_images[xi], data.real_images[yi], depth);

        const double parts[] = {L.adv_G, L.adv_F, L.cyc, L.id, L.depth, L.disc_X, L.disc_Y};
        for (double v : parts)
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "training diverged at step " + std::to_string(s + 1) +
                    ": non-finite loss component (adv_G=" + std::to_string(L.adv_G) +
                    " adv_F=" + std::to_string(L.adv_F) + " cyc=" + std::to_string(L.cyc) +
                    " id=" + std::to_string(L.id) + " depth=" + std::to_string(L.depth) +
                    " disc_X=" + std::to_string(L.disc_X) +
                    " disc_Y=" + std::to_string(L.disc_Y) + ")");
        log.push_back(L);

        if (!cfg_.out_dir.empty() && cfg_.checkpoint_interval > 0 &&
            (s + 1) % cfg_.checkpoint_interval == 0 && s + 1 < cfg_.steps) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "ckpt_%06d.fckpt", s + 1);
            model_.to_checkpoint(cfg_.seed, s + 1, &opt_gen_, &opt_disc_)
                .save((fs::path(cfg_.out_dir) / buf).string());
        }
    }
    if (!cfg_.out_dir.empty()) {
        model_.to_checkpoint(cfg_.seed, cfg_.steps, &opt_gen_, &opt_disc_)
            .save((fs::path(cfg_.out_dir) / "ckpt_final.fckpt").string());
        write_loss_log(log, (fs::path(cfg_.out_dir) / "loss_log.csv").string());
    }
    return log;
}

void write_loss_log(const std::vector<StepLosses>& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write loss log: " + path);
    out << "step,adv_G,adv_F,cyc,id,depth,disc_X,disc_Y\n";
    for (size_t i = 0; i < log.size(); ++i) {
        const StepLosses& L = log[i];
        out << i + 1 << "," << L.adv_G << "," << L.adv_F << "," << L.cyc << "," << L.id << ","
            << L.depth << "," << L.disc_X << "," << L.disc_Y << "\n";
    }
}

}  // namespace folds::translate
