#pragma once

#include <json.hpp>

#include "folds/nn/checkpoint.hpp"
#include "folds/nn/layers.hpp"
#include "folds/nn/optim.hpp"

namespace folds::translate {

struct LossWeights {
    float adv = 1.0f;
    float cyc = 10.0f;
    float id = 5.0f;
    float depth = 1.0f;  // 0 recovers the baseline CycleGAN objective exactly
};

struct TranslatorConfig {
    int image_size = 256;
    int channels = 3;
    int gen_width = 16;      // base generator width
    int gen_res_blocks = 2;
    int disc_width = 16;     // base discriminator width
    LossWeights weights;
    int buffer_capacity = 50;
    float lr = 2e-4f;
    float beta1 = 0.5f;
    float beta2 = 0.999f;

    nlohmann::json to_json() const;
    static TranslatorConfig from_json(const nlohmann::json& j);
};

// 3-level residual encoder-decoder.
nn::ModulePtr build_generator(const TranslatorConfig& cfg, const std::string& name);
// 3-layer patch discriminator.
nn::ModulePtr build_discriminator(const TranslatorConfig& cfg, const std::string& name);

// CycleGAN image history buffer: keeps up to `capacity` past fakes; each
// query either returns the incoming image or swaps it for a stored one.
class ImagePool {
public:
    explicit ImagePool(int capacity) : capacity_(capacity) {}

    Tensor query(const Tensor& image, Rng& rng);
    int size() const { return static_cast<int>(pool_.size()); }
    int capacity() const { return capacity_; }

private:
    int capacity_;
    std::vector<Tensor> pool_;
};

struct TranslationModel {
    TranslatorConfig cfg;
    nn::ModulePtr G;   // X (simulated) -> Y (realistic)
    nn::ModulePtr F;   // Y -> X
    nn::ModulePtr Dx;  // discriminates domain X
    nn::ModulePtr Dy;
    ImagePool pool_fake_x{50};
    ImagePool pool_fake_y{50};

    static TranslationModel create(const TranslatorConfig& cfg, uint64_t seed);

    // Checkpoint round trip: parameters, optimizer state, step counter, seed.
    nn::Checkpoint to_checkpoint(uint64_t seed, int step, nn::Adam* opt_gen,
                                 nn::Adam* opt_disc) const;
    static TranslationModel from_checkpoint(const nn::Checkpoint& ckpt);
    void load_optimizer_state(const nn::Checkpoint& ckpt, nn::Adam& opt_gen, nn::Adam& opt_disc);

    std::vector<nn::Param*> generator_params() const;
    std::vector<nn::Param*> discriminator_params() const;
};

}  // namespace folds::translate
