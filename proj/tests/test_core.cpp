#include <doctest.h>

#include <fstream>

#include "folds/core/convert.hpp"
#include "folds/core/image.hpp"
#include "folds/core/rng.hpp"
#include "folds/nn/checkpoint.hpp"
#include "helpers.hpp"

using namespace folds;
using testing::TempDir;

TEST_CASE("rng is deterministic and forkable") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

    Rng c(123);
    Rng child1 = c.fork(1);
    Rng child2 = c.fork(2);
    CHECK(child1.uniform() != child2.uniform());

    Rng d(7);
    for (int i = 0; i < 1000; ++i) {
        const int64_t v = d.below(10);
        CHECK(v >= 0);
        CHECK(v < 10);
    }

    std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8}, v2 = v1;
    Rng s1(9), s2(9);
    s1.shuffle(v1);
    s2.shuffle(v2);
    CHECK(v1 == v2);
}

TEST_CASE("png round trips") {
    TempDir tmp("png");

    ImageU8 rgb(13, 9, 3);
    Rng rng(1);
    for (auto& p : rgb.pixels) p = static_cast<uint8_t>(rng.below(256));
    io::write_png(tmp.str("rgb.png"), rgb);
    ImageU8 back = io::read_png(tmp.str("rgb.png"));
    CHECK(back.width == rgb.width);
    CHECK(back.height == rgb.height);
    CHECK(back.channels == 3);
    CHECK(back.pixels == rgb.pixels);

    ImageU8 gray(7, 5, 1);
    for (auto& p : gray.pixels) p = static_cast<uint8_t>(rng.below(256));
    io::write_png(tmp.str("gray.png"), gray);
    CHECK(io::read_png(tmp.str("gray.png")).pixels == gray.pixels);

    ImageU16 inst(11, 6, 1);
    for (auto& p : inst.pixels) p = static_cast<uint16_t>(rng.below(65536));
    io::write_png16(tmp.str("inst.png"), inst);
    ImageU16 inst_back = io::read_png16(tmp.str("inst.png"));
    CHECK(inst_back.pixels == inst.pixels);

    CHECK_THROWS(io::read_png(tmp.str("missing.png")));
    CHECK_THROWS(io::read_png16(tmp.str("rgb.png")));  // not 16-bit gray
}

TEST_CASE("pfm round trip preserves floats exactly") {
    TempDir tmp("pfm");
    ImageF depth(8, 6, 1);
    Rng rng(3);
    for (auto& p : depth.pixels) p = static_cast<float>(rng.uniform(0.01, 250.0));
    depth.at(2, 3) = 0.0f;
    io::write_pfm(tmp.str("d.pfm"), depth);
    ImageF back = io::read_pfm(tmp.str("d.pfm"));
    CHECK(back.width == 8);
    CHECK(back.height == 6);
    CHECK(back.pixels == depth.pixels);
}

TEST_CASE("u8 tensor conversion round trip") {
    ImageU8 img(5, 4, 3);
    Rng rng(5);
    for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.below(256));
    const Tensor t = tensor_from_u8(img);
    CHECK(t.dim(1) == 3);
    for (int64_t i = 0; i < t.numel(); ++i) {
        CHECK(t[i] >= -1.0f);
        CHECK(t[i] <= 1.0f);
    }
    CHECK(u8_from_tensor(t).pixels == img.pixels);
}

TEST_CASE("manifest save, load and validation") {
    TempDir tmp("manifest");
    std::filesystem::create_directories(tmp.str("rgb"));
    ImageU8 img(4, 4, 3);
    io::write_png(tmp.str("rgb/000000.png"), img);

    data::DatasetManifest m;
    m.name = "toy";
    m.role = "train";
    m.fps = 25.0;
    m.has_fold_labels = true;
    data::FrameRecord f;
    f.id = "000000";
    f.rgb = "rgb/000000.png";
    f.pose = {1, 2, 3, 1, 0, 0, 0};
    f.intrinsics = {2, 2, 2, 2};
    m.frames.push_back(f);
    m.base_dir = tmp.str();
    data::save_manifest(m, tmp.str("manifest.json"));

    data::DatasetManifest back = data::load_manifest(tmp.str("manifest.json"));
    CHECK(back.name == "toy");
    CHECK(back.fps == 25.0);
    CHECK(back.has_fold_labels);
    CHECK(back.frames.size() == 1);
    CHECK(back.frames[0].pose[2] == 3.0);
    CHECK(back.resolve(back.frames[0].rgb) == tmp.str("rgb/000000.png"));

    // referenced file goes missing -> error naming the path
    std::filesystem::remove(tmp.str("rgb/000000.png"));
    try {
        data::load_manifest(tmp.str("manifest.json"));
        FAIL("expected missing-file error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("000000.png") != std::string::npos);
    }

    std::ofstream(tmp.str("bad.json")) << "{\"name\": 42}";
    CHECK_THROWS(data::load_manifest(tmp.str("bad.json")));
}

TEST_CASE("checkpoint container round trip") {
    TempDir tmp("ckpt");
    nn::Checkpoint c;
    c.meta["kind"] = "test";
    c.meta["step"] = 17;
    Tensor t({2, 3});
    for (int64_t i = 0; i < t.numel(); ++i) t[i] = static_cast<float>(i) * 0.5f;
    c.add("layer.weight", t);
    c.save(tmp.str("model.fckpt"));

    nn::Checkpoint back = nn::Checkpoint::load(tmp.str("model.fckpt"));
    CHECK(back.meta.at("kind") == "test");
    CHECK(back.meta.at("step") == 17);
    const Tensor& w = back.require("layer.weight");
    CHECK(w.shape() == t.shape());
    for (int64_t i = 0; i < t.numel(); ++i) CHECK(w[i] == t[i]);
    CHECK(back.find("no.such.tensor") == nullptr);
    CHECK_THROWS(back.require("no.such.tensor"));

    std::ofstream(tmp.str("junk.fckpt")) << "definitely not a checkpoint";
    CHECK_THROWS(nn::Checkpoint::load(tmp.str("junk.fckpt")));
}
