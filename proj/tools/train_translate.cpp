#include <CLI11.hpp>

#include "folds/translate/train.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Train the structure-preserving image translator"};
    std::string sim_path, real_path, out_dir, oracle_id = "stub";
    std::vector<float> weights;
    translate::TrainTranslateConfig cfg;
    app.add_option("--sim", sim_path, "simulated-domain manifest")->required();
    app.add_option("--real", real_path, "realistic-domain manifest")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--oracle", oracle_id, "depth oracle id (stub)");
    app.add_option("--weights", weights,
                   "loss weights: adversarial,cycle,identity,depth")->delimiter(',');
    app.add_option("--steps", cfg.steps, "training steps");
    app.add_option("--seed", cfg.seed, "rng seed");
    app.add_option("--image-size", cfg.model.image_size, "square image resolution");
    app.add_option("--gen-width", cfg.model.gen_width, "generator base width");
    app.add_option("--gen-res-blocks", cfg.model.gen_res_blocks, "generator residual blocks");
    app.add_option("--disc-width", cfg.model.disc_width, "discriminator base width");
    app.add_option("--lr", cfg.model.lr, "learning rate");
    app.add_option("--checkpoint-interval", cfg.checkpoint_interval,
                   "steps between checkpoints (0: final only)");
    CLI11_PARSE(app, argc, argv);

    try {
        if (!weights.empty()) {
            if (weights.size() != 4)
                throw std::runtime_error("--weights expects exactly 4 comma-separated values");
            cfg.model.weights = {weights[0], weights[1], weights[2], weights[3]};
        }
        cfg.out_dir = out_dir;
        cfg.oracle_id = oracle_id;
        const bool with_depth = cfg.model.weights.depth > 0.0f;
        data::DatasetManifest sim = data::load_manifest(sim_path);
        data::DatasetManifest real = data::load_manifest(real_path);
        std::unique_ptr<translate::DepthOracle> oracle;
        if (with_depth) oracle = translate::make_oracle(cfg.oracle_id);
        translate::TranslationTrainer trainer(
            translate::TranslationModel::create(cfg.model, cfg.seed), cfg, oracle.get());
        const auto log =
            trainer.run(translate::load_translate_data(sim, real, cfg.model.image_size, with_depth));
        std::printf("trained %zu steps; final cycle loss %.4f\n", log.size(),
                    log.empty() ? 0.0 : log.back().cyc);
        if (trainer.oracle_clamp_warnings() > 0)
            std::fprintf(stderr, "warning: oracle emitted %d clamped depth predictions\n",
                         trainer.oracle_clamp_warnings());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
