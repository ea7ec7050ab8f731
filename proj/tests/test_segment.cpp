#include <doctest.h>

#include <fstream>
#include <set>

#include "folds/core/convert.hpp"
#include "folds/eval/metrics.hpp"
#include "folds/segment/batches.hpp"
#include "folds/segment/instances.hpp"
#include "folds/segment/model.hpp"
#include "folds/segment/train.hpp"
#include "helpers.hpp"

using namespace folds;
using testing::TempDir;

namespace {

segment::PairedBatchConfig stream_cfg(int batch, int size, uint64_t seed, bool augment = false) {
    segment::PairedBatchConfig c;
    c.triples_per_batch = batch;
    c.image_size = size;
    c.seed = seed;
    c.augment = augment;
    return c;
}

ImageU8 mask_from_binary(const std::vector<std::vector<int>>& rows) {
    ImageU8 img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = rows[size_t(y)][size_t(x)] ? 255 : 0;
    return img;
}

}  // namespace

TEST_CASE("batches per epoch rounds up") {
    TempDir tmp("bpe");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 5, 16);
    segment::PairedBatchStream s2(sim, sim, stream_cfg(2, 16, 0));
    CHECK(s2.frame_count() == 5);
    CHECK(s2.batches_per_epoch() == 3);
    segment::PairedBatchStream s8(sim, sim, stream_cfg(8, 16, 0));
    CHECK(s8.batches_per_epoch() == 1);
    // same ceil-division that puts 1400 frames into 175 batches of 8
    CHECK((1400 + 8 - 1) / 8 == 175);
}

TEST_CASE("mismatched frame ids are rejected with the ids listed") {
    TempDir tmp("ids");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 4, 16);
    data::DatasetManifest aug = testing::make_toy_dataset(tmp.str("aug"), "aug", 3, 16);
    try {
        segment::PairedBatchStream bad(sim, aug, stream_cfg(2, 16, 0));
        FAIL("expected an id-mismatch error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(sim.frames.back().id) != std::string::npos);
    }
}

TEST_CASE("epochs are deterministic in (seed, epoch) and pair-consistent") {
    TempDir tmp("det");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 6, 16);
    segment::PairedBatchStream a(sim, sim, stream_cfg(2, 16, 7));
    segment::PairedBatchStream b(sim, sim, stream_cfg(2, 16, 7));
    segment::PairedBatchStream c(sim, sim, stream_cfg(2, 16, 8));

    auto flatten_ids = [](const std::vector<segment::PairedBatch>& e) {
        std::vector<std::string> ids;
        for (const auto& batch : e)
            ids.insert(ids.end(), batch.frame_ids.begin(), batch.frame_ids.end());
        return ids;
    };

    const auto ea = a.epoch(3), eb = b.epoch(3);
    REQUIRE(ea.size() == eb.size());
    CHECK(flatten_ids(ea) == flatten_ids(eb));
    for (size_t i = 0; i < ea.size(); ++i)
        for (int64_t k = 0; k < ea[i].sim.numel(); ++k) CHECK(ea[i].sim[k] == eb[i].sim[k]);

    // different seed or epoch index permutes differently (overwhelmingly)
    CHECK(flatten_ids(a.epoch(3)) != flatten_ids(c.epoch(3)));
    CHECK(flatten_ids(a.epoch(0)) != flatten_ids(a.epoch(1)));

    // every frame id appears exactly once per epoch
    std::vector<std::string> ids = flatten_ids(ea);
    std::set<std::string> uniq(ids.begin(), ids.end());
    CHECK(uniq.size() == 6);
    CHECK(ids.size() == 6);
}

TEST_CASE("both texture variants of a frame share one batch slot and mask") {
    TempDir tmp("pair");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 4, 16);
    // aug stream reuses the same frames: sim and aug slots must match exactly
    segment::PairedBatchStream s(sim, sim, stream_cfg(2, 16, 3));
    for (const auto& batch : s.epoch(0)) {
        CHECK(batch.sim.shape() == batch.aug.shape());
        for (int64_t k = 0; k < batch.sim.numel(); ++k) CHECK(batch.sim[k] == batch.aug[k]);
        CHECK(batch.mask.dim(1) == 1);
        for (int64_t k = 0; k < batch.mask.numel(); ++k)
            CHECK((batch.mask[k] == 0.0f || batch.mask[k] == 1.0f));
    }
}

TEST_CASE("augmentation stays pair-consistent and changes the pixels") {
    TempDir tmp("augc");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 4, 16);
    segment::PairedBatchStream plain(sim, sim, stream_cfg(4, 16, 5, false));
    segment::PairedBatchStream aug(sim, sim, stream_cfg(4, 16, 5, true));

    bool any_changed = false;
    for (int e = 0; e < 3; ++e) {
        const auto pe = plain.epoch(e), ae = aug.epoch(e);
        REQUIRE(pe.size() == ae.size());
        for (size_t i = 0; i < pe.size(); ++i) {
            // identical transform applied to both texture variants
            for (int64_t k = 0; k < ae[i].sim.numel(); ++k)
                CHECK(ae[i].sim[k] == ae[i].aug[k]);
            for (int64_t k = 0; k < ae[i].sim.numel(); ++k)
                if (ae[i].sim[k] != pe[i].sim[k]) any_changed = true;
        }
    }
    CHECK(any_changed);
}

TEST_CASE("segmentation model output shape and checkpoint round trip") {
    segment::SegConfig cfg;
    cfg.width = 8;
    cfg.image_size = 16;
    segment::SegModel model(cfg, 42);
    Rng rng(1);
    Tensor x({2, 3, 16, 16});
    for (int64_t i = 0; i < x.numel(); ++i) x[i] = static_cast<float>(rng.uniform(-1, 1));
    Tensor scores = model.forward(x);
    CHECK(scores.dim(0) == 2);
    CHECK(scores.dim(1) == 2);
    CHECK(scores.dim(2) == 16);
    CHECK(scores.dim(3) == 16);

    TempDir tmp("segckpt");
    model.to_checkpoint(42, 3).save(tmp.str("m.fckpt"));
    segment::SegModel back =
        segment::SegModel::from_checkpoint(nn::Checkpoint::load(tmp.str("m.fckpt")));
    Tensor sb = back.forward(x);
    for (int64_t i = 0; i < scores.numel(); ++i) CHECK(sb[i] == scores[i]);

    CHECK_THROWS(segment::make_backbone("frontier-foundation-v3", 3, 8));
}

TEST_CASE("trainer overfits a single frame") {
    TempDir tmp("overfit");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 1, 16);
    segment::SegTrainConfig tc;
    tc.model.width = 16;
    tc.model.image_size = 16;
    tc.epochs = 150;
    tc.lr = 0.15f;
    tc.triples_per_batch = 1;
    tc.seed = 11;
    segment::PairedBatchStream stream(sim, sim, stream_cfg(1, 16, 11));
    segment::SegTrainer trainer(tc, stream);
    std::vector<segment::EpochStats> log = trainer.run();
    REQUIRE(log.size() == 150);
    CHECK(log.back().train_iou >= 0.99f);
    CHECK(log.back().loss < log.front().loss);

    // prediction agrees with the ground-truth mask
    ImageU8 rgb = io::read_png(sim.resolve(sim.frames[0].rgb));
    segment::Prediction pred = segment::predict_mask(trainer.model(), tensor_from_u8(rgb));
    ImageU8 gt = io::read_png(sim.resolve(sim.frames[0].mask));
    CHECK(eval::binary_iou(pred.mask, gt) >= 0.95);

    Tensor wrong({1, 3, 32, 32});
    CHECK_THROWS(segment::predict_mask(trainer.model(), wrong));
}

TEST_CASE("frozen backbone stays fixed while the decoder trains") {
    TempDir tmp("frozen");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 2, 16);
    segment::SegTrainConfig tc;
    tc.model.width = 8;
    tc.model.image_size = 16;
    tc.model.freeze_backbone = true;
    tc.epochs = 2;
    tc.lr = 0.05f;
    tc.triples_per_batch = 2;
    tc.seed = 13;
    segment::PairedBatchStream stream(sim, sim, stream_cfg(2, 16, 13));
    segment::SegTrainer trainer(tc, stream);

    std::vector<nn::Param*> all = trainer.model().all_params();
    std::vector<nn::Param*> trainable = trainer.model().trainable_params();
    CHECK(trainable.size() < all.size());
    std::set<nn::Param*> trainset(trainable.begin(), trainable.end());
    std::vector<std::vector<float>> before;
    for (nn::Param* p : all)
        before.emplace_back(p->value.data(), p->value.data() + p->value.numel());

    trainer.run();

    bool decoder_moved = false;
    for (size_t i = 0; i < all.size(); ++i) {
        const bool is_trainable = trainset.count(all[i]) > 0;
        bool moved = false;
        for (int64_t k = 0; k < all[i]->value.numel(); ++k)
            if (all[i]->value[k] != before[i][size_t(k)]) moved = true;
        if (!is_trainable) CHECK_FALSE(moved);  // frozen backbone untouched
        decoder_moved |= (is_trainable && moved);
    }
    CHECK(decoder_moved);
}

TEST_CASE("trainer run writes checkpoints and a loss log") {
    TempDir tmp("seglog");
    data::DatasetManifest sim = testing::make_toy_dataset(tmp.str("sim"), "sim", 2, 16);
    segment::SegTrainConfig tc;
    tc.model.width = 8;
    tc.model.image_size = 16;
    tc.epochs = 3;
    tc.triples_per_batch = 2;
    tc.seed = 3;
    tc.checkpoint_interval = 2;
    tc.out_dir = tmp.str("run");
    segment::PairedBatchStream stream(sim, sim, stream_cfg(2, 16, 3));
    segment::SegTrainer(tc, stream).run();
    CHECK(std::filesystem::exists(tmp.str("run/ckpt_0002.fckpt")));
    CHECK(std::filesystem::exists(tmp.str("run/ckpt_final.fckpt")));
    std::ifstream csv(tmp.str("run/loss_log.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "epoch,loss,train_iou,lr");
}

TEST_CASE("instance extraction: ordering, connectivity, min area") {
    // two components: a 6-pixel block and a 2-pixel bar, plus a diagonal-only
    // neighbor of the block that must remain separate under 4-connectivity
    ImageU8 mask = mask_from_binary({
        {1, 1, 0, 0, 0, 0},
        {1, 1, 0, 0, 1, 1},
        {1, 1, 0, 0, 0, 0},
        {0, 0, 1, 0, 0, 0},
        {0, 0, 1, 0, 0, 0},
        {0, 0, 1, 0, 0, 0},
    });
    ImageU16 inst = segment::extract_instances(mask, 1);
    // block (6 px) -> id 1; vertical bar (3 px) -> id 2; top bar (2 px) -> id 3
    CHECK(inst.at(0, 0) == 1);
    CHECK(inst.at(1, 2) == 1);
    CHECK(inst.at(2, 4) == 2);
    CHECK(inst.at(4, 1) == 3);
    CHECK(inst.at(5, 1) == 3);
    CHECK(inst.at(3, 3) == 0);

    // min_area drops the small components entirely, ids stay contiguous
    ImageU16 big = segment::extract_instances(mask, 4);
    int max_id = 0;
    for (uint16_t v : big.pixels) max_id = std::max(max_id, int(v));
    CHECK(max_id == 1);
    CHECK(big.at(0, 0) == 1);
    CHECK(big.at(4, 1) == 0);

    // empty mask -> no instances
    ImageU8 empty(4, 4, 1);
    ImageU16 none = segment::extract_instances(empty, 1);
    for (uint16_t v : none.pixels) CHECK(v == 0);

    // equal areas break ties by scan order
    ImageU8 ties = mask_from_binary({
        {0, 0, 1, 1},
        {0, 0, 0, 0},
        {1, 1, 0, 0},
    });
    ImageU16 ti = segment::extract_instances(ties, 1);
    CHECK(ti.at(2, 0) == 1);
    CHECK(ti.at(0, 2) == 2);
}
