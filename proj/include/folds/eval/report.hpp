#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "folds/eval/metrics.hpp"

namespace folds::eval {

// "mean ± std", each rounded to two decimals with one redundant trailing
// zero dropped (48.90 renders as 48.9, 32.64 stays 32.64).
std::string format_cell(double mean, double std);

struct ReportRow {
    std::string model;
    std::string train_set;
    std::string translation;
    std::vector<std::string> cells;  // aligned with ReportTable::eval_sets; "" when absent
};

struct ReportTable {
    std::vector<std::string> eval_sets;  // column order: first appearance
    std::vector<ReportRow> rows;         // row order: first appearance of (model, train, translation)

    const std::string& cell(const std::string& model, const std::string& train_set,
                            const std::string& translation,
                            const std::string& eval_set) const;  // throws when absent
};

ReportTable build_report(const std::vector<MetricReport>& runs);

std::string render_text(const ReportTable& t);
std::string render_csv(const ReportTable& t);
nlohmann::json report_json(const std::vector<MetricReport>& runs);

// Best mean of `model_ours` minus best mean of `model_baseline` on one
// evaluation set, in IoU points.
double improvement(const std::vector<MetricReport>& runs, const std::string& eval_set,
                   const std::string& model_ours, const std::string& model_baseline);

// Recorded result rows (external records, not targets): JSON list of
// {model, train_set, translation, eval_set, mean, std}.
std::vector<MetricReport> load_recorded_runs(const std::string& path);

// Dataset catalog fixture: name, per-split frame counts and annotation flags.
struct DatasetPreset {
    std::string name;
    int train_frames = 0;
    int test_frames = 0;
    bool simulated = false;
    bool has_fold_labels = false;
    bool has_depth = false;
    bool has_manual_annotations = false;
    std::string notes;
};

std::vector<DatasetPreset> load_dataset_presets(const std::string& path);

}  // namespace folds::eval
