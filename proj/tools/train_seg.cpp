#include <CLI11.hpp>

#include "folds/segment/train.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{"Train the fold-segmentation model on paired batches"};
    std::string sim_path, aug_path, out_dir;
    segment::SegTrainConfig cfg;
    app.add_option("--sim", sim_path, "original-texture manifest")->required();
    app.add_option("--sim-aug", aug_path, "translated-texture manifest")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--backbone", cfg.model.backbone, "backbone id (tiny-conv)");
    app.add_flag("--freeze-backbone", cfg.model.freeze_backbone, "train the decoder only");
    app.add_option("--epochs", cfg.epochs, "training epochs");
    app.add_option("--lr", cfg.lr, "base learning rate (cosine decay)");
    app.add_option("--image-size", cfg.model.image_size, "square image resolution");
    app.add_option("--width", cfg.model.width, "backbone base width");
    app.add_option("--batch", cfg.triples_per_batch, "triples per batch");
    app.add_option("--seed", cfg.seed, "rng seed");
    app.add_flag("--augment", cfg.augment, "pair-consistent flips and small rotations");
    app.add_option("--checkpoint-interval", cfg.checkpoint_interval,
                   "epochs between checkpoints (0: final only)");
    CLI11_PARSE(app, argc, argv);

    try {
        data::DatasetManifest sim = data::load_manifest(sim_path);
        data::DatasetManifest aug = data::load_manifest(aug_path);
        segment::PairedBatchConfig bc{cfg.triples_per_batch, cfg.model.image_size, cfg.seed,
                                      cfg.augment};
        segment::PairedBatchStream stream(sim, aug, bc);
        cfg.out_dir = out_dir;
        segment::SegTrainer trainer(cfg, stream);
        const auto log = trainer.run();
        std::printf("trained %d epochs; final loss %.4f, train IoU %.4f\n", cfg.epochs,
                    log.back().loss, log.back().train_iou);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
