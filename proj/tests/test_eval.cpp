#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>

#include "folds/core/rng.hpp"
#include "folds/eval/matching.hpp"
#include "folds/eval/metrics.hpp"
#include "folds/eval/overlay.hpp"
#include "folds/eval/report.hpp"
#include "helpers.hpp"

using namespace folds;
using testing::TempDir;

namespace {

ImageU8 half_mask(int size, bool left) {
    ImageU8 m(size, size, 1);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            m.at(x, y) = (left ? x < size / 2 : y < size / 2) ? 255 : 0;
    return m;
}

// Straight-line reference for the greedy matcher: naive per-pair pixel scans
// for the IoUs, then the same sort-and-claim policy.
eval::MatchResult reference_match(const ImageU16& pred, const ImageU16& gt, double tau) {
    int max_pred = 0, max_gt = 0;
    for (uint16_t v : pred.pixels) max_pred = std::max(max_pred, int(v));
    for (uint16_t v : gt.pixels) max_gt = std::max(max_gt, int(v));

    struct Cand {
        int p, g;
        double iou;
    };
    std::vector<Cand> cands;
    for (int p = 1; p <= max_pred; ++p)
        for (int g = 1; g <= max_gt; ++g) {
            int64_t inter = 0, uni = 0;
            for (size_t i = 0; i < pred.pixels.size(); ++i) {
                const bool a = pred.pixels[i] == p, b = gt.pixels[i] == g;
                inter += a && b;
                uni += a || b;
            }
            if (uni == 0) continue;
            const double iou = double(inter) / double(uni);
            if (iou >= tau) cands.push_back({p, g, iou});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.g != b.g) return a.g < b.g;
        return a.p < b.p;
    });
    eval::MatchResult r;
    std::vector<bool> used_p(size_t(max_pred) + 1), used_g(size_t(max_gt) + 1);
    for (const Cand& c : cands) {
        if (used_p[size_t(c.p)] || used_g[size_t(c.g)]) continue;
        used_p[size_t(c.p)] = used_g[size_t(c.g)] = true;
        r.matches.push_back({c.p, c.g, c.iou});
    }
    auto present = [](const ImageU16& img, int id) {
        return std::find(img.pixels.begin(), img.pixels.end(), uint16_t(id)) != img.pixels.end();
    };
    for (int p = 1; p <= max_pred; ++p)
        if (present(pred, p) && !used_p[size_t(p)]) r.unmatched_pred.push_back(p);
    for (int g = 1; g <= max_gt; ++g)
        if (present(gt, g) && !used_g[size_t(g)]) r.unmatched_gt.push_back(g);
    return r;
}

eval::MetricReport recorded(const std::string& model, const std::string& train,
                            const std::string& translation, const std::string& eval_set,
                            double mean, double std_) {
    eval::MetricReport r;
    r.meta = {model, train, translation, eval_set};
    r.mean = mean;
    r.std = std_;
    return r;
}

}  // namespace

TEST_CASE("binary iou hand cases") {
    ImageU8 a = half_mask(8, true), b = half_mask(8, false);
    CHECK(eval::binary_iou(a, a) == 1.0);
    // left half vs top half: intersection one quarter, union three quarters
    CHECK(eval::binary_iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(eval::binary_iou(a, b) == eval::binary_iou(b, a));

    ImageU8 empty(8, 8, 1);
    CHECK(eval::binary_iou(empty, empty) == 1.0);
    CHECK(eval::binary_iou(a, empty) == 0.0);

    ImageU8 ones(8, 8, 1);
    for (auto& p : ones.pixels) p = 1;  // {0,1} masks behave like {0,255}
    ImageU8 full(8, 8, 1);
    for (auto& p : full.pixels) p = 255;
    CHECK(eval::binary_iou(ones, full) == 1.0);

    ImageU8 rgb(8, 8, 3);
    CHECK_THROWS(eval::binary_iou(rgb, a));
    ImageU8 small(4, 4, 1);
    CHECK_THROWS(eval::binary_iou(small, a));
    ImageU8 bad(8, 8, 1);
    bad.at(0, 0) = 7;
    CHECK_THROWS(eval::binary_iou(bad, a));
}

TEST_CASE("iou grows with overlap") {
    ImageU8 gt(16, 16, 1);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 8; ++x) gt.at(x, y) = 255;
    double prev = -1.0;
    for (int w = 2; w <= 8; w += 2) {
        ImageU8 pred(16, 16, 1);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < w; ++x) pred.at(x, y) = 255;
        const double iou = eval::binary_iou(pred, gt);
        CHECK(iou > prev);
        prev = iou;
    }
    CHECK(prev == 1.0);
}

TEST_CASE("aggregate mean and population std in percent") {
    eval::Aggregate a = eval::aggregate({0.5, 0.5, 0.5});
    CHECK(a.mean == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(a.std == doctest::Approx(0.0).epsilon(1e-12));

    eval::Aggregate b = eval::aggregate({0.0, 1.0});
    CHECK(b.mean == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(b.std == doctest::Approx(50.0).epsilon(1e-12));

    CHECK_THROWS(eval::aggregate({}));
}

TEST_CASE("metric report round trip and consistency check") {
    TempDir tmp("mr");
    eval::MetricReport r = eval::MetricReport::from_frames(
        {"net", "sim", "N.A.", "val"}, {0.25, 0.5, 0.75});
    CHECK(r.mean == doctest::Approx(50.0));
    eval::save_metric_report(r, tmp.str("m.json"));
    eval::MetricReport back = eval::load_metric_report(tmp.str("m.json"));
    CHECK(back.meta.model == "net");
    CHECK(back.per_frame == r.per_frame);
    CHECK(back.mean == doctest::Approx(r.mean).epsilon(1e-12));

    // stored aggregate inconsistent with per-frame values -> rejected
    nlohmann::json j;
    std::ifstream(tmp.str("m.json")) >> j;
    j["mean"] = 99.0;
    std::ofstream(tmp.str("tampered.json")) << j;
    CHECK_THROWS(eval::load_metric_report(tmp.str("tampered.json")));
}

TEST_CASE("cell formatting") {
    CHECK(eval::format_cell(32.64, 10.26) == "32.64 ± 10.26");
    CHECK(eval::format_cell(48.9, 9.62) == "48.9 ± 9.62");
    CHECK(eval::format_cell(48.90001, 9.62) == "48.9 ± 9.62");
    CHECK(eval::format_cell(50.0, 50.0) == "50.0 ± 50.0");
    CHECK(eval::format_cell(44.3, 11.47) == "44.3 ± 11.47");
    CHECK(eval::format_cell(0.0, 0.0) == "0.0 ± 0.0");
}

TEST_CASE("greedy matcher hand cases") {
    ImageU16 gt(8, 8, 1), pred(8, 8, 1);
    // gt 1: rows 0-2; gt 2: rows 5-7
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 8; ++x) gt.at(x, y) = 1;
    for (int y = 5; y < 8; ++y)
        for (int x = 0; x < 8; ++x) gt.at(x, y) = 2;

    SUBCASE("exact prediction matches everything") {
        pred.pixels = gt.pixels;
        eval::MatchResult r = eval::match_instances(pred, gt, 0.5);
        REQUIRE(r.matches.size() == 2);
        CHECK(r.unmatched_pred.empty());
        CHECK(r.unmatched_gt.empty());
        CHECK(r.matches[0].iou == 1.0);
    }

    SUBCASE("tau separates a 0.6-overlap pair") {
        // pred 1 covers rows 0-2 plus rows 3-4 => inter 24, union 40, iou 0.6
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 8; ++x) pred.at(x, y) = 1;
        eval::MatchResult lo = eval::match_instances(pred, gt, 0.5);
        REQUIRE(lo.matches.size() == 1);
        CHECK(lo.matches[0].iou == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(lo.unmatched_gt == std::vector<int>{2});

        eval::MatchResult hi = eval::match_instances(pred, gt, 0.7);
        CHECK(hi.matches.empty());
        CHECK(hi.unmatched_pred == std::vector<int>{1});
        REQUIRE(hi.unmatched_gt.size() == 2);
    }

    SUBCASE("equal ious break toward the lower gt id") {
        // one prediction overlapping both gt bands symmetrically
        for (int y = 2; y < 6; ++y)
            for (int x = 0; x < 8; ++x) pred.at(x, y) = 1;
        eval::MatchResult r = eval::match_instances(pred, gt, 0.05);
        REQUIRE(r.matches.size() == 1);
        CHECK(r.matches[0].gt_id == 1);
    }
}

TEST_CASE("greedy matcher agrees with the straight-line reference") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
        ImageU16 pred(8, 8, 1), gt(8, 8, 1);
        const int np = 1 + int(rng.below(4)), ng = 1 + int(rng.below(4));
        // random rectangles per id; later ids overwrite earlier ones
        auto paint = [&](ImageU16& img, int ids) {
            for (int id = 1; id <= ids; ++id) {
                const int x0 = int(rng.below(7)), y0 = int(rng.below(7));
                const int x1 = x0 + 1 + int(rng.below(int64_t(8 - x0 - 1)));
                const int y1 = y0 + 1 + int(rng.below(int64_t(8 - y0 - 1)));
                for (int y = y0; y <= y1; ++y)
                    for (int x = x0; x <= x1; ++x) img.at(x, y) = uint16_t(id);
            }
        };
        paint(pred, np);
        paint(gt, ng);
        const double tau = trial % 2 ? 0.5 : 0.1;

        eval::MatchResult got = eval::match_instances(pred, gt, tau);
        eval::MatchResult ref = reference_match(pred, gt, tau);
        REQUIRE(got.matches.size() == ref.matches.size());
        for (size_t i = 0; i < got.matches.size(); ++i) {
            CHECK(got.matches[i].pred_id == ref.matches[i].pred_id);
            CHECK(got.matches[i].gt_id == ref.matches[i].gt_id);
            CHECK(got.matches[i].iou == doctest::Approx(ref.matches[i].iou).epsilon(1e-12));
        }
        CHECK(got.unmatched_pred == ref.unmatched_pred);
        CHECK(got.unmatched_gt == ref.unmatched_gt);
    }
}

TEST_CASE("overlay invariants") {
    ImageU8 img(8, 8, 3);
    Rng rng(5);
    for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.below(200));

    ImageU16 none(8, 8, 1);
    eval::MatchResult empty_match;
    CHECK(eval::render_overlay(img, none, empty_match).pixels == img.pixels);

    ImageU16 pred(8, 8, 1);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 4; ++x) pred.at(x, y) = 1;
    for (int y = 5; y < 8; ++y)
        for (int x = 4; x < 8; ++x) pred.at(x, y) = 2;

    eval::MatchResult match;
    match.matches.push_back({1, 3, 0.9});  // pred 1 matched to gt 3
    match.unmatched_pred.push_back(2);

    // alpha 1: matched pixels take the gt partner's palette color exactly,
    // unmatched predictions render white, the rest passes through
    ImageU8 out = eval::render_overlay(img, pred, match, 1.0f);
    const std::array<uint8_t, 3> c3 = eval::palette_color(3);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            for (int c = 0; c < 3; ++c) {
                const uint8_t v = out.at(x, y, c);
                if (pred.at(x, y) == 1) CHECK(v == c3[size_t(c)]);
                else if (pred.at(x, y) == 2) CHECK(v == 255);
                else CHECK(v == img.at(x, y, c));
            }

    // distinct gt ids get distinct palette colors (first dozen)
    for (int i = 1; i <= 12; ++i)
        for (int j = i + 1; j <= 12; ++j) CHECK(eval::palette_color(i) != eval::palette_color(j));

    // gray input is promoted to RGB
    ImageU8 gray(8, 8, 1);
    ImageU8 promoted = eval::render_overlay(gray, pred, match, 0.5f);
    CHECK(promoted.channels == 3);
}

TEST_CASE("report assembly, ordering, cells and improvement") {
    std::vector<eval::MetricReport> runs;
    runs.push_back(recorded("FoldIt", "FI-OC & FI-VC", "N.A.", "Sim-Aug", 36.50, 11.19));
    runs.push_back(recorded("FoldIt", "FI-OC & FI-VC", "N.A.", "EM", 29.06, 10.98));
    runs.push_back(recorded("EndoFM-TU", "Sim-Aug", "Ours", "Sim-Aug", 48.9, 9.62));
    runs.push_back(recorded("EndoFM-TU", "Sim-Aug", "Ours", "EM", 42.5, 11.59));
    runs.push_back(recorded("EndoFM-TU", "Sim", "N.A.", "Sim-Aug", 38.1, 8.56));

    eval::ReportTable t = eval::build_report(runs);
    CHECK(t.eval_sets == std::vector<std::string>{"Sim-Aug", "EM"});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].model == "FoldIt");
    CHECK(t.cell("EndoFM-TU", "Sim-Aug", "Ours", "Sim-Aug") == "48.9 ± 9.62");
    CHECK(t.cell("FoldIt", "FI-OC & FI-VC", "N.A.", "EM") == "29.06 ± 10.98");
    CHECK_THROWS(t.cell("EndoFM-TU", "Sim", "N.A.", "EM"));  // cell absent
    CHECK_THROWS(t.cell("nope", "x", "y", "Sim-Aug"));

    const std::string text = eval::render_text(t);
    CHECK(text.find("48.9 ± 9.62") != std::string::npos);
    const std::string csv = eval::render_csv(t);
    CHECK(csv.find("EndoFM-TU") != std::string::npos);
    CHECK(eval::report_json(runs).at("runs").size() == 5);

    // best ours (48.9) minus best baseline (38.1) on the Sim-Aug eval set
    CHECK(eval::improvement(runs, "Sim-Aug", "EndoFM-TU", "FoldIt") ==
          doctest::Approx(48.9 - 36.50).epsilon(1e-12));
    CHECK_THROWS(eval::improvement(runs, "Sim-Aug", "EndoFM-TU", "missing-model"));
}

TEST_CASE("recorded runs and dataset presets load from json") {
    TempDir tmp("rec");
    std::ofstream(tmp.str("rec.json")) << R"({"rows":[
        {"model":"A","train_set":"Sim","translation":"N.A.","eval_set":"EM","mean":30.15,"std":10.73},
        {"model":"B","train_set":"Sim-Aug","translation":"Ours","eval_set":"EM","mean":42.5,"std":11.59}
    ]})";
    std::vector<eval::MetricReport> rows = eval::load_recorded_runs(tmp.str("rec.json"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].meta.model == "A");
    CHECK(rows[0].mean == doctest::Approx(30.15));
    CHECK(rows[1].per_frame.empty());

    std::ofstream(tmp.str("cat.json")) << R"({"datasets":[
        {"name":"EM","train_frames":1400,"test_frames":100,"simulated":false,
         "has_fold_labels":false,"has_depth":false,"has_manual_annotations":true,"notes":""},
        {"name":"Sim","train_frames":1400,"test_frames":500,"simulated":true,
         "has_fold_labels":true,"has_depth":true,"has_manual_annotations":false,"notes":""}
    ]})";
    std::vector<eval::DatasetPreset> cat = eval::load_dataset_presets(tmp.str("cat.json"));
    REQUIRE(cat.size() == 2);
    CHECK(cat[0].name == "EM");
    CHECK(cat[0].has_manual_annotations);
    CHECK(cat[1].train_frames == 1400);
    CHECK(cat[1].has_depth);
}
