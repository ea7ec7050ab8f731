#include "folds/pipeline/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace fs = std::filesystem;

namespace folds::pipeline {
namespace {

const char* const kStageNames[] = {"gen-data", "train-translate", "translate",
                                   "train-seg", "eval", "report"};

bool stage_enabled(const nlohmann::json& section) { return section.value("enabled", true); }

void require_file(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) throw ValidationError(what + " not found: " + path);
}

}  // namespace

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string ExperimentConfig::resolve(const std::string& rel) const {
    if (rel.empty() || fs::path(rel).is_absolute()) return rel;
    return (fs::path(base_dir) / rel).string();
}

std::string ExperimentConfig::out_path(const std::string& rel) const {
    return (fs::path(resolve(output_root)) / rel).string();
}

std::string ExperimentConfig::dataset_dir(const std::string& name) const {
    return out_path("datasets/" + name);
}

std::string ExperimentConfig::stage_hash(const std::string& stage) const {
    nlohmann::json j{{"seed", seed}, {"stage", stage},
                     {"section", raw_sections.value(stage, nlohmann::json::object())}};
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("config parse error in " + path + ": " + e.what());
    }

    ExperimentConfig c;
    c.base_dir = fs::path(path).parent_path().string();
    if (c.base_dir.empty()) c.base_dir = ".";
    if (!j.contains("output_root")) throw ValidationError("config missing 'output_root'");
    c.seed = j.value("seed", uint64_t{0});
    c.output_root = j.at("output_root").get<std::string>();
    for (const char* name : kStageNames)
        c.raw_sections[name] = j.value(name, nlohmann::json::object());

    const nlohmann::json& gd = c.raw_sections["gen-data"];
    c.gen_data_enabled = stage_enabled(gd);
    for (const auto& d : gd.value("datasets", nlohmann::json::array())) {
        GenDatasetSpec s;
        s.name = d.at("name").get<std::string>();
        s.mesh = d.at("mesh").get<std::string>();
        s.trajectory = d.at("trajectory").get<std::string>();
        s.width = d.value("width", s.width);
        s.height = d.value("height", s.height);
        s.role = d.value("role", s.role);
        s.theta_dir = d.value("theta_dir", s.theta_dir);
        s.theta_curv = d.value("theta_curv", s.theta_curv);
        s.min_component = d.value("min_component", s.min_component);
        c.datasets.push_back(std::move(s));
    }

    const nlohmann::json& tt = c.raw_sections["train-translate"];
    c.train_translate_enabled = stage_enabled(tt);
    c.translate_x = tt.value("x", "");
    c.translate_y = tt.value("y", "");
    c.translate_steps = tt.value("steps", c.translate_steps);
    c.translate_checkpoint_interval = tt.value("checkpoint_interval", 0);
    c.oracle_id = tt.value("oracle", c.oracle_id);
    c.translator = translate::TranslatorConfig::from_json(tt.value("model", nlohmann::json::object()));

    const nlohmann::json& tr = c.raw_sections["translate"];
    c.translate_enabled = stage_enabled(tr);
    c.translate_input = tr.value("input", c.translate_x);
    c.translated_name = tr.value("name", c.translated_name);

    const nlohmann::json& sg = c.raw_sections["train-seg"];
    c.train_seg_enabled = stage_enabled(sg);
    c.seg_sim = sg.value("sim", c.translate_input);
    c.seg_aug = sg.value("sim_aug", c.translated_name);
    c.seg_model = segment::SegConfig::from_json(sg.value("model", nlohmann::json::object()));
    c.seg_epochs = sg.value("epochs", c.seg_epochs);
    c.seg_lr = sg.value("lr", c.seg_lr);
    c.seg_triples_per_batch = sg.value("triples_per_batch", c.seg_triples_per_batch);
    c.seg_augment = sg.value("augment", c.seg_augment);

    const nlohmann::json& ev = c.raw_sections["eval"];
    c.eval_enabled = stage_enabled(ev);
    c.eval_set = ev.value("eval_set", c.seg_sim);
    c.eval_tau = ev.value("tau", c.eval_tau);
    c.eval_overlays = ev.value("overlays", c.eval_overlays);

    const nlohmann::json& rp = c.raw_sections["report"];
    c.report_enabled = stage_enabled(rp);
    c.recorded_results = rp.value("recorded_results", "");

    // --- validation before any stage runs ---
    std::set<std::string> produced;
    if (c.gen_data_enabled) {
        if (c.datasets.empty())
            throw ValidationError("gen-data enabled but 'datasets' is empty");
        for (const GenDatasetSpec& s : c.datasets) {
            if (!produced.insert(s.name).second)
                throw ValidationError("duplicate dataset name '" + s.name + "'");
            require_file(c.resolve(s.mesh), "mesh for dataset '" + s.name + "'");
            require_file(c.resolve(s.trajectory), "trajectory for dataset '" + s.name + "'");
            if (s.width <= 0 || s.height <= 0)
                throw ValidationError("dataset '" + s.name + "' has non-positive resolution");
        }
    }
    auto check_dataset_ref = [&](const std::string& name, const std::string& field) {
        if (name.empty()) throw ValidationError("missing dataset reference: " + field);
        if (produced.count(name)) return;
        const std::string manifest = (fs::path(c.dataset_dir(name)) / "manifest.json").string();
        if (!fs::exists(manifest))
            throw ValidationError(field + " references dataset '" + name +
                                  "' which no enabled stage produces and which does not "
                                  "exist at " + manifest);
    };
    if (c.train_translate_enabled) {
        check_dataset_ref(c.translate_x, "train-translate.x");
        check_dataset_ref(c.translate_y, "train-translate.y");
        if (c.translate_steps <= 0) throw ValidationError("train-translate.steps must be > 0");
    }
    if (c.translate_enabled) {
        check_dataset_ref(c.translate_input, "translate.input");
        produced.insert(c.translated_name);
    }
    if (c.train_seg_enabled) {
        check_dataset_ref(c.seg_sim, "train-seg.sim");
        check_dataset_ref(c.seg_aug, "train-seg.sim_aug");
        if (c.seg_epochs <= 0) throw ValidationError("train-seg.epochs must be > 0");
        if (c.seg_lr <= 0.0f) throw ValidationError("train-seg.lr must be > 0");
    }
    if (c.eval_enabled) {
        check_dataset_ref(c.eval_set, "eval.eval_set");
        if (c.eval_tau < 0.0 || c.eval_tau > 1.0)
            throw ValidationError("eval.tau must be in [0, 1]");
    }
    if (c.report_enabled && !c.recorded_results.empty())
        require_file(c.resolve(c.recorded_results), "report.recorded_results");

    return c;
}

}  // namespace folds::pipeline
