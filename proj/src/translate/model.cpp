#include "folds/translate/model.hpp"

#include <stdexcept>

namespace folds::translate {

using nn::Conv2d;
using nn::InstanceNorm2d;
using nn::LeakyReLU;
using nn::ModulePtr;
using nn::ReLU;
using nn::Residual;
using nn::Sequential;
using nn::Tanh;
using nn::Upsample2x;

nlohmann::json TranslatorConfig::to_json() const {
    return {{"image_size", image_size},
            {"channels", channels},
            {"gen_width", gen_width},
            {"gen_res_blocks", gen_res_blocks},
            {"disc_width", disc_width},
            {"lambda_adv", weights.adv},
            {"lambda_cyc", weights.cyc},
            {"lambda_id", weights.id},
            {"lambda_depth", weights.depth},
            {"buffer_capacity", buffer_capacity},
            {"lr", lr},
            {"beta1", beta1},
            {"beta2", beta2}};
}

TranslatorConfig TranslatorConfig::from_json(const nlohmann::json& j) {
    TranslatorConfig c;
    c.image_size = j.value("image_size", c.image_size);
    c.channels = j.value("channels", c.channels);
    c.gen_width = j.value("gen_width", c.gen_width);
    c.gen_res_blocks = j.value("gen_res_blocks", c.gen_res_blocks);
    c.disc_width = j.value("disc_width", c.disc_width);
    c.weights.adv = j.value("lambda_adv", c.weights.adv);
    c.weights.cyc = j.value("lambda_cyc", c.weights.cyc);
    c.weights.id = j.value("lambda_id", c.weights.id);
    c.weights.depth = j.value("lambda_depth", c.weights.depth);
    c.buffer_capacity = j.value("buffer_capacity", c.buffer_capacity);
    c.lr = j.value("lr", c.lr);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    return c;
}

ModulePtr build_generator(const TranslatorConfig& cfg, const std::string& name) {
    const int w = cfg.gen_width;
    const int c = cfg.channels;
    auto net = std::make_unique<Sequential>();
    net->add(std::make_unique<Conv2d>(name + ".in", c, w, 3, 1, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".in_n", w));
    net->add(std::make_unique<ReLU>());
    net->add(std::make_unique<Conv2d>(name + ".down1", w, 2 * w, 3, 2, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".down1_n", 2 * w));
    net->add(std::make_unique<ReLU>());
    net->add(std::make_unique<Conv2d>(name + ".down2", 2 * w, 4 * w, 3, 2, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".down2_n", 4 * w));
    net->add(std::make_unique<ReLU>());
    for (int r = 0; r < cfg.gen_res_blocks; ++r) {
        const std::string rn = name + ".res" + std::to_string(r);
        auto body = std::make_unique<Sequential>();
        body->add(std::make_unique<Conv2d>(rn + ".c1", 4 * w, 4 * w, 3, 1, 1));
        body->add(std::make_unique<InstanceNorm2d>(rn + ".n1", 4 * w));
        body->add(std::make_unique<ReLU>());
        body->add(std::make_unique<Conv2d>(rn + ".c2", 4 * w, 4 * w, 3, 1, 1));
        body->add(std::make_unique<InstanceNorm2d>(rn + ".n2", 4 * w));
        net->add(std::make_unique<Residual>(std::move(body)));
    }
    net->add(std::make_unique<Upsample2x>());
    net->add(std::make_unique<Conv2d>(name + ".up1", 4 * w, 2 * w, 3, 1, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".up1_n", 2 * w));
    net->add(std::make_unique<ReLU>());
    net->add(std::make_unique<Upsample2x>());
    net->add(std::make_unique<Conv2d>(name + ".up2", 2 * w, w, 3, 1, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".up2_n", w));
    net->add(std::make_unique<ReLU>());
    net->add(std::make_unique<Conv2d>(name + ".out", w, c, 3, 1, 1));
    net->add(std::make_unique<Tanh>());
    return net;
}

ModulePtr build_discriminator(const TranslatorConfig& cfg, const std::string& name) {
    const int w = cfg.disc_width;
    auto net = std::make_unique<Sequential>();
    net->add(std::make_unique<Conv2d>(name + ".c1", cfg.channels, w, 4, 2, 1));
    net->add(std::make_unique<LeakyReLU>(0.2f));
    net->add(std::make_unique<Conv2d>(name + ".c2", w, 2 * w, 4, 2, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".n2", 2 * w));
    net->add(std::make_unique<LeakyReLU>(0.2f));
    net->add(std::make_unique<Conv2d>(name + ".c3", 2 * w, 4 * w, 4, 1, 1));
    net->add(std::make_unique<InstanceNorm2d>(name + ".n3", 4 * w));
    net->add(std::make_unique<LeakyReLU>(0.2f));
    net->add(std::make_unique<Conv2d>(name + ".out", 4 * w, 1, 4, 1, 1));
    return net;
}

Tensor ImagePool::query(const Tensor& image, Rng& rng) {
    if (capacity_ <= 0) return image;
    if (static_cast<int>(pool_.size()) < capacity_) {
        pool_.push_back(image);
        return image;
    }
    if (rng.uniform() < 0.5) {
        const auto idx = static_cast<size_t>(rng.below(capacity_));
        Tensor old = pool_[idx];
        pool_[idx] = image;
        return old;
    }
    return image;
}

TranslationModel TranslationModel::create(const TranslatorConfig& cfg, uint64_t seed) {
    TranslationModel m;
    m.cfg = cfg;
    m.G = build_generator(cfg, "G");
    m.F = build_generator(cfg, "F");
    m.Dx = build_discriminator(cfg, "Dx");
    m.Dy = build_discriminator(cfg, "Dy");
    m.pool_fake_x = ImagePool(cfg.buffer_capacity);
    m.pool_fake_y = ImagePool(cfg.buffer_capacity);
    Rng rng(seed);
    m.G->init(rng);
    m.F->init(rng);
    m.Dx->init(rng);
    m.Dy->init(rng);
    return m;
}

std::vector<nn::Param*> TranslationModel::generator_params() const {
    std::vector<nn::Param*> p;
    G->collect_params(p);
    F->collect_params(p);
    return p;
}

std::vector<nn::Param*> TranslationModel::discriminator_params() const {
    std::vector<nn::Param*> p;
    Dx->collect_params(p);
    Dy->collect_params(p);
    return p;
}

namespace {

void pack_moments(nn::Checkpoint& ckpt, const std::string& prefix,
                  const std::vector<nn::Param*>& params, nn::Adam& opt) {
    auto& m1 = opt.moments1();
    auto& m2 = opt.moments2();
    for (size_t i = 0; i < params.size(); ++i) {
        ckpt.add(prefix + ".m1." + params[i]->name, m1[i]);
        ckpt.add(prefix + ".m2." + params[i]->name, m2[i]);
    }
}

void unpack_moments(const nn::Checkpoint& ckpt, const std::string& prefix,
                    const std::vector<nn::Param*>& params, nn::Adam& opt) {
    auto& m1 = opt.moments1();
    auto& m2 = opt.moments2();
    for (size_t i = 0; i < params.size(); ++i) {
        if (const Tensor* t = ckpt.find(prefix + ".m1." + params[i]->name)) m1[i] = *t;
        if (const Tensor* t = ckpt.find(prefix + ".m2." + params[i]->name)) m2[i] = *t;
    }
}

}  // namespace

nn::Checkpoint TranslationModel::to_checkpoint(uint64_t seed, int step, nn::Adam* opt_gen,
                                               nn::Adam* opt_disc) const {
    nn::Checkpoint ckpt;
    ckpt.meta["kind"] = "translate";
    ckpt.meta["arch"] = cfg.to_json();
    ckpt.meta["seed"] = seed;
    ckpt.meta["step"] = step;
    for (nn::Param* p : generator_params()) ckpt.add(p->name, p->value);
    for (nn::Param* p : discriminator_params()) ckpt.add(p->name, p->value);
    if (opt_gen) {
        ckpt.meta["opt_gen_steps"] = opt_gen->step_count();
        pack_moments(ckpt, "adam_gen", generator_params(), *opt_gen);
    }
    if (opt_disc) {
        ckpt.meta["opt_disc_steps"] = opt_disc->step_count();
        pack_moments(ckpt, "adam_disc", discriminator_params(), *opt_disc);
    }
    return ckpt;
}

TranslationModel TranslationModel::from_checkpoint(const nn::Checkpoint& ckpt) {
    if (ckpt.meta.value("kind", "") != "translate")
        throw std::runtime_error("checkpoint is not a translation checkpoint");
    TranslatorConfig cfg = TranslatorConfig::from_json(ckpt.meta.at("arch"));
    TranslationModel m = create(cfg, ckpt.meta.value("seed", uint64_t{0}));
    for (nn::Param* p : m.generator_params()) p->value = ckpt.require(p->name);
    for (nn::Param* p : m.discriminator_params()) p->value = ckpt.require(p->name);
    return m;
}

void TranslationModel::load_optimizer_state(const nn::Checkpoint& ckpt, nn::Adam& opt_gen,
                                            nn::Adam& opt_disc) {
    opt_gen.set_step_count(ckpt.meta.value("opt_gen_steps", 0));
    opt_disc.set_step_count(ckpt.meta.value("opt_disc_steps", 0));
    unpack_moments(ckpt, "adam_gen", generator_params(), opt_gen);
    unpack_moments(ckpt, "adam_disc", discriminator_params(), opt_disc);
}

}  // namespace folds::translate
