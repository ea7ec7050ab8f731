#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "folds/segment/model.hpp"
#include "folds/translate/model.hpp"

namespace folds::pipeline {

// Config problems exit with code 1, stage failures with code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenDatasetSpec {
    std::string name;
    std::string mesh;        // OBJ/PLY path, relative to the config file
    std::string trajectory;  // trajectory JSON path
    int width = 64;
    int height = 64;
    std::string role = "train";
    double theta_dir = 0.15;
    double theta_curv = 0.25;
    int min_component = 20;
};

// One experiment file drives the whole pipeline. Each stage section mirrors
// the standalone CLI of its module; a single top-level seed fixes every
// stage.
struct ExperimentConfig {
    uint64_t seed = 0;
    std::string output_root;
    std::string base_dir;  // directory of the config file

    bool gen_data_enabled = true;
    std::vector<GenDatasetSpec> datasets;

    bool train_translate_enabled = true;
    std::string translate_x;  // dataset name, simulated domain
    std::string translate_y;  // dataset name, realistic domain
    int translate_steps = 1000;
    int translate_checkpoint_interval = 0;
    std::string oracle_id = "stub";
    translate::TranslatorConfig translator;

    bool translate_enabled = true;
    std::string translate_input;
    std::string translated_name = "sim-aug";

    bool train_seg_enabled = true;
    std::string seg_sim;
    std::string seg_aug;
    segment::SegConfig seg_model;
    int seg_epochs = 20;
    float seg_lr = 1e-2f;
    int seg_triples_per_batch = 8;
    bool seg_augment = false;

    bool eval_enabled = true;
    std::string eval_set;
    double eval_tau = 0.5;
    int eval_overlays = 4;

    bool report_enabled = true;
    std::string recorded_results;  // optional fixture of external result rows

    // Raw parsed stage sections, kept for hashing.
    nlohmann::json raw_sections;

    static ExperimentConfig load(const std::string& path);

    std::string resolve(const std::string& rel) const;
    std::string out_path(const std::string& rel) const;
    std::string dataset_dir(const std::string& name) const;

    // Canonical hash input for one stage: its raw section plus the seed.
    std::string stage_hash(const std::string& stage) const;
};

uint64_t fnv1a(const std::string& s);

}  // namespace folds::pipeline
