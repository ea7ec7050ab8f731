#include "folds/pipeline/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "folds/core/convert.hpp"
#include "folds/data/manifest.hpp"
#include "folds/eval/matching.hpp"
#include "folds/eval/metrics.hpp"
#include "folds/eval/overlay.hpp"
#include "folds/eval/report.hpp"
#include "folds/geo/curvature.hpp"
#include "folds/geo/dataset.hpp"
#include "folds/geo/folds.hpp"
#include "folds/segment/instances.hpp"
#include "folds/segment/train.hpp"
#include "folds/translate/train.hpp"
#include "folds/translate/translate.hpp"

namespace fs = std::filesystem;

namespace folds::pipeline {
namespace {

// matches every ground-truth instance to itself, for GT reference overlays
eval::MatchResult identity_match(const ImageU16& gt) {
    eval::MatchResult m;
    std::vector<bool> seen(65536, false);
    for (uint16_t v : gt.pixels)
        if (v && !seen[v]) {
            seen[v] = true;
            m.matches.push_back({v, v, 1.0});
        }
    return m;
}

}  // namespace

nlohmann::json LedgerEntry::to_json() const {
    return {{"stage", stage},       {"status", status},
            {"seconds", seconds},   {"outputs", outputs},
            {"info", info},         {"config_hash", config_hash},
            {"code_version", code_version}};
}

LedgerEntry LedgerEntry::from_json(const nlohmann::json& j) {
    LedgerEntry e;
    e.stage = j.at("stage").get<std::string>();
    e.status = j.at("status").get<std::string>();
    e.seconds = j.value("seconds", 0.0);
    e.outputs = j.value("outputs", std::vector<std::string>{});
    e.info = j.value("info", nlohmann::json::object());
    e.config_hash = j.value("config_hash", "");
    e.code_version = j.value("code_version", "");
    return e;
}

void RunLedger::append(const LedgerEntry& e) {
    entries.push_back(e);
    std::ofstream out(path, std::ios::app);
    if (!out) throw StageError("cannot append to ledger " + path);
    out << e.to_json().dump() << "\n";
}

RunLedger RunLedger::load(const std::string& path) {
    RunLedger l;
    l.path = path;
    std::ifstream in(path);
    std::string line;
    while (in && std::getline(in, line)) {
        if (line.empty()) continue;
        l.entries.push_back(LedgerEntry::from_json(nlohmann::json::parse(line)));
    }
    return l;
}

const LedgerEntry* RunLedger::last_ok(const std::string& stage) const {
    const LedgerEntry* found = nullptr;
    for (const LedgerEntry& e : entries)
        if (e.stage == stage && e.status == "ok") found = &e;
    return found;
}

std::string PipelineRunner::manifest_path(const std::string& dataset_name) const {
    return (fs::path(cfg_.dataset_dir(dataset_name)) / "manifest.json").string();
}

LedgerEntry PipelineRunner::run_gen_data() {
    LedgerEntry e;
    e.stage = "gen-data";
    nlohmann::json manifests = nlohmann::json::object();
    for (const GenDatasetSpec& s : cfg_.datasets) {
        geo::TriMesh mesh = geo::load_mesh(cfg_.resolve(s.mesh));
        geo::CurvatureField field = geo::estimate_curvature(mesh);
        geo::FoldParams fp;
        fp.theta_dir = s.theta_dir;
        fp.theta_curv = s.theta_curv;
        fp.min_component = s.min_component;
        geo::FoldLabeling labels = geo::detect_folds(mesh, field, fp);
        geo::Trajectory traj = geo::load_trajectory(cfg_.resolve(s.trajectory));
        geo::apply_default_intrinsics(traj, s.width, s.height);
        geo::GenerateParams gp;
        gp.width = s.width;
        gp.height = s.height;
        gp.split_name = s.name;
        gp.role = s.role;
        geo::generate_dataset(mesh, labels, traj, gp, cfg_.dataset_dir(s.name));
        const std::string mpath = manifest_path(s.name);
        e.outputs.push_back(mpath);
        manifests[s.name] = mpath;
    }
    e.info["manifests"] = manifests;
    return e;
}

LedgerEntry PipelineRunner::run_train_translate() {
    LedgerEntry e;
    e.stage = "train-translate";
    data::DatasetManifest x = data::load_manifest(manifest_path(cfg_.translate_x));
    data::DatasetManifest y = data::load_manifest(manifest_path(cfg_.translate_y));

    translate::TrainTranslateConfig tc;
    tc.model = cfg_.translator;
    tc.steps = cfg_.translate_steps;
    tc.seed = cfg_.seed;
    tc.checkpoint_interval = cfg_.translate_checkpoint_interval;
    tc.out_dir = cfg_.out_path("translate");
    tc.oracle_id = cfg_.oracle_id;

    const bool with_depth = tc.model.weights.depth > 0.0f;
    std::unique_ptr<translate::DepthOracle> oracle;
    if (with_depth) oracle = translate::make_oracle(tc.oracle_id);

    translate::TranslationTrainer trainer(
        translate::TranslationModel::create(tc.model, tc.seed), tc, oracle.get());
    trainer.run(translate::load_translate_data(x, y, tc.model.image_size, with_depth));

    const std::string ckpt = (fs::path(tc.out_dir) / "ckpt_final.fckpt").string();
    const std::string csv = (fs::path(tc.out_dir) / "loss_log.csv").string();
    e.outputs = {ckpt, csv};
    e.info["checkpoint"] = ckpt;
    e.info["loss_csv"] = csv;
    return e;
}

LedgerEntry PipelineRunner::run_translate() {
    LedgerEntry e;
    e.stage = "translate";
    const std::string ckpt_path =
        (fs::path(cfg_.out_path("translate")) / "ckpt_final.fckpt").string();
    nn::Checkpoint ckpt = nn::Checkpoint::load(ckpt_path);
    data::DatasetManifest input = data::load_manifest(manifest_path(cfg_.translate_input));
    translate::translate_dataset(ckpt, input, cfg_.dataset_dir(cfg_.translated_name),
                                 cfg_.translated_name);
    const std::string out_manifest = manifest_path(cfg_.translated_name);
    e.outputs = {out_manifest};
    e.info["source_manifest"] = manifest_path(cfg_.translate_input);
    e.info["output_manifest"] = out_manifest;
    return e;
}

LedgerEntry PipelineRunner::run_train_seg() {
    LedgerEntry e;
    e.stage = "train-seg";
    data::DatasetManifest sim = data::load_manifest(manifest_path(cfg_.seg_sim));
    data::DatasetManifest aug = data::load_manifest(manifest_path(cfg_.seg_aug));

    segment::PairedBatchConfig bc;
    bc.triples_per_batch = cfg_.seg_triples_per_batch;
    bc.image_size = cfg_.seg_model.image_size;
    bc.seed = cfg_.seed;
    bc.augment = cfg_.seg_augment;
    segment::PairedBatchStream stream(sim, aug, bc);

    segment::SegTrainConfig tc;
    tc.model = cfg_.seg_model;
    tc.epochs = cfg_.seg_epochs;
    tc.lr = cfg_.seg_lr;
    tc.triples_per_batch = cfg_.seg_triples_per_batch;
    tc.seed = cfg_.seed;
    tc.augment = cfg_.seg_augment;
    tc.out_dir = cfg_.out_path("seg");
    segment::SegTrainer trainer(tc, stream);
    const std::vector<segment::EpochStats> log = trainer.run();

    const std::string ckpt = (fs::path(tc.out_dir) / "ckpt_final.fckpt").string();
    const std::string csv = (fs::path(tc.out_dir) / "loss_log.csv").string();
    e.outputs = {ckpt, csv};
    e.info["checkpoint"] = ckpt;
    e.info["loss_csv"] = csv;
    e.info["final_train_iou"] = log.empty() ? 0.0f : log.back().train_iou;
    return e;
}

LedgerEntry PipelineRunner::run_eval() {
    LedgerEntry e;
    e.stage = "eval";
    const std::string ckpt_path = (fs::path(cfg_.out_path("seg")) / "ckpt_final.fckpt").string();
    segment::SegModel model = segment::SegModel::from_checkpoint(nn::Checkpoint::load(ckpt_path));
    data::DatasetManifest ds = data::load_manifest(manifest_path(cfg_.eval_set));

    const std::string eval_dir = cfg_.out_path("eval");
    const std::string pred_dir = (fs::path(eval_dir) / "pred").string();
    const std::string overlay_dir = (fs::path(eval_dir) / "overlays").string();
    fs::create_directories(pred_dir);
    fs::create_directories(overlay_dir);

    const int size = model.config().image_size;
    const int min_area = std::max(1, 50 * size * size / (256 * 256));

    std::vector<double> ious;
    nlohmann::json frames = nlohmann::json::array();
    for (const data::FrameRecord& f : ds.frames) {
        if (f.mask.empty())
            throw StageError("eval set '" + cfg_.eval_set + "' frame " + f.id + " has no mask");
        ImageU8 rgb = io::read_png(ds.resolve(f.rgb));
        segment::Prediction pred = segment::predict_mask(model, tensor_from_u8(rgb));
        ImageU8 gt = io::read_png(ds.resolve(f.mask));
        ious.push_back(eval::binary_iou(pred.mask, gt));

        ImageU16 pred_inst = segment::extract_instances(pred.mask, min_area);
        const std::string mask_path = (fs::path(pred_dir) / (f.id + "_mask.png")).string();
        const std::string inst_path = (fs::path(pred_dir) / (f.id + "_instance.png")).string();
        io::write_png(mask_path, geo::mask_to_u8(pred.mask));
        io::write_png16(inst_path, pred_inst);

        if (static_cast<int>(frames.size()) < cfg_.eval_overlays && !f.instance.empty()) {
            ImageU16 gt_inst = io::read_png16(ds.resolve(f.instance));
            eval::MatchResult match = eval::match_instances(pred_inst, gt_inst, cfg_.eval_tau);
            const std::string gt_overlay =
                (fs::path(overlay_dir) / (f.id + "_gt.png")).string();
            const std::string pred_overlay =
                (fs::path(overlay_dir) / (f.id + "_pred.png")).string();
            io::write_png(gt_overlay, eval::render_overlay(rgb, gt_inst, identity_match(gt_inst)));
            io::write_png(pred_overlay, eval::render_overlay(rgb, pred_inst, match));
            frames.push_back({{"id", f.id},
                              {"rgb", ds.resolve(f.rgb)},
                              {"gt_overlay", gt_overlay},
                              {"pred_overlay", pred_overlay}});
        }
    }

    eval::RunMeta meta;
    meta.model = model.config().backbone;
    meta.train_set = cfg_.seg_sim + " & " + cfg_.seg_aug;
    meta.translation = cfg_.translator.weights.depth > 0.0f ? "Ours" : "CycleGAN";
    meta.eval_set = cfg_.eval_set;
    eval::MetricReport report = eval::MetricReport::from_frames(meta, std::move(ious));
    const std::string metrics_path = (fs::path(eval_dir) / "metrics.json").string();
    eval::save_metric_report(report, metrics_path);

    e.outputs = {metrics_path};
    e.info["metrics"] = metrics_path;
    e.info["frames"] = frames;
    e.info["mean_iou"] = report.mean;
    return e;
}

LedgerEntry PipelineRunner::run_report() {
    LedgerEntry e;
    e.stage = "report";
    std::vector<eval::MetricReport> runs;
    const std::string metrics_path =
        (fs::path(cfg_.out_path("eval")) / "metrics.json").string();
    if (fs::exists(metrics_path)) runs.push_back(eval::load_metric_report(metrics_path));
    if (!cfg_.recorded_results.empty()) {
        for (eval::MetricReport& r : eval::load_recorded_runs(cfg_.resolve(cfg_.recorded_results)))
            runs.push_back(std::move(r));
    }
    if (runs.empty()) throw StageError("report stage has no metric inputs");

    const std::string dir = cfg_.out_path("report");
    fs::create_directories(dir);
    const eval::ReportTable table = eval::build_report(runs);
    const std::string txt = (fs::path(dir) / "report.txt").string();
    const std::string csv = (fs::path(dir) / "report.csv").string();
    const std::string json = (fs::path(dir) / "report.json").string();
    std::ofstream(txt) << eval::render_text(table);
    std::ofstream(csv) << eval::render_csv(table);
    std::ofstream(json) << eval::report_json(runs).dump(2) << "\n";
    e.outputs = {txt, csv, json};
    e.info["report_json"] = json;
    return e;
}

RunLedger PipelineRunner::run(bool resume) {
    fs::create_directories(cfg_.resolve(cfg_.output_root));
    const std::string ledger_path = cfg_.out_path("ledger.jsonl");

    RunLedger previous;
    if (resume && fs::exists(ledger_path)) previous = RunLedger::load(ledger_path);
    RunLedger ledger;
    ledger.path = ledger_path;
    if (!resume) std::ofstream(ledger_path, std::ios::trunc);

    struct Stage {
        const char* name;
        bool enabled;
        LedgerEntry (PipelineRunner::*fn)();
    };
    const Stage stages[] = {
        {"gen-data", cfg_.gen_data_enabled, &PipelineRunner::run_gen_data},
        {"train-translate", cfg_.train_translate_enabled, &PipelineRunner::run_train_translate},
        {"translate", cfg_.translate_enabled, &PipelineRunner::run_translate},
        {"train-seg", cfg_.train_seg_enabled, &PipelineRunner::run_train_seg},
        {"eval", cfg_.eval_enabled, &PipelineRunner::run_eval},
        {"report", cfg_.report_enabled, &PipelineRunner::run_report},
    };

    for (const Stage& s : stages) {
        const std::string hash = cfg_.stage_hash(s.name);
        if (!s.enabled) {
            LedgerEntry e;
            e.stage = s.name;
            e.status = "skipped";
            e.config_hash = hash;
            e.info["reason"] = "disabled";
            ledger.append(e);
            continue;
        }
        if (const LedgerEntry* done = previous.last_ok(s.name);
            done && done->config_hash == hash) {
            LedgerEntry e = *done;
            e.status = "skipped";
            e.seconds = 0.0;
            e.info["reason"] = "resumed";
            ledger.append(e);
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
            LedgerEntry e = (this->*s.fn)();
            e.status = "ok";
            e.config_hash = hash;
            e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ledger.append(e);
        } catch (const std::exception& ex) {
            LedgerEntry e;
            e.stage = s.name;
            e.status = "failed";
            e.config_hash = hash;
            e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            e.info["error"] = ex.what();
            ledger.append(e);
            throw StageError(std::string(s.name) + " failed: " + ex.what());
        }
    }
    return ledger;
}

}  // namespace folds::pipeline
