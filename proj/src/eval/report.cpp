#include "folds/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace folds::eval {
namespace {

std::string trim_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s.size() > 2 && s[s.size() - 1] == '0' && s[s.size() - 3] == '.') s.pop_back();
    return s;
}

size_t find_or_add(std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<size_t>(it - v.begin());
    v.push_back(s);
    return v.size() - 1;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_cell(double mean, double std) {
    return trim_number(mean) + " ± " + trim_number(std);
}

const std::string& ReportTable::cell(const std::string& model, const std::string& train_set,
                                     const std::string& translation,
                                     const std::string& eval_set) const {
    auto col = std::find(eval_sets.begin(), eval_sets.end(), eval_set);
    if (col == eval_sets.end())
        throw std::out_of_range("report has no evaluation set '" + eval_set + "'");
    for (const ReportRow& r : rows)
        if (r.model == model && r.train_set == train_set && r.translation == translation) {
            const std::string& c = r.cells[static_cast<size_t>(col - eval_sets.begin())];
            if (c.empty())
                throw std::out_of_range("report cell " + model + "/" + train_set + "/" +
                                        translation + " is empty on '" + eval_set + "'");
            return c;
        }
    throw std::out_of_range("report has no row " + model + "/" + train_set + "/" + translation);
}

ReportTable build_report(const std::vector<MetricReport>& runs) {
    if (runs.empty()) throw std::invalid_argument("report over zero runs");
    ReportTable t;
    for (const MetricReport& r : runs) find_or_add(t.eval_sets, r.meta.eval_set);
    for (const MetricReport& r : runs) {
        size_t row = t.rows.size();
        for (size_t i = 0; i < t.rows.size(); ++i)
            if (t.rows[i].model == r.meta.model && t.rows[i].train_set == r.meta.train_set &&
                t.rows[i].translation == r.meta.translation) {
                row = i;
                break;
            }
        if (row == t.rows.size())
            t.rows.push_back({r.meta.model, r.meta.train_set, r.meta.translation,
                              std::vector<std::string>(t.eval_sets.size())});
        const size_t col = find_or_add(t.eval_sets, r.meta.eval_set);
        t.rows[row].cells[col] = format_cell(r.mean, r.std);
    }
    return t;
}

std::string render_text(const ReportTable& t) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head = {"Model", "Train Set", "Translation"};
    head.insert(head.end(), t.eval_sets.begin(), t.eval_sets.end());
    grid.push_back(head);
    for (const ReportRow& r : t.rows) {
        std::vector<std::string> row = {r.model, r.train_set, r.translation};
        row.insert(row.end(), r.cells.begin(), r.cells.end());
        grid.push_back(row);
    }
    std::vector<size_t> width(head.size(), 0);
    for (const auto& row : grid)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::string out;
    for (size_t i = 0; i < grid.size(); ++i) {
        for (size_t c = 0; c < grid[i].size(); ++c) {
            out += grid[i][c];
            if (c + 1 < grid[i].size()) out.append(width[c] - grid[i][c].size() + 2, ' ');
        }
        out += '\n';
        if (i == 0) {
            size_t total = 0;
            for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c + 1 < width.size() ? 2 : 0);
            out.append(total, '-');
            out += '\n';
        }
    }
    return out;
}

std::string render_csv(const ReportTable& t) {
    std::string out = "model,train_set,translation";
    for (const std::string& e : t.eval_sets) out += "," + csv_escape(e);
    out += '\n';
    for (const ReportRow& r : t.rows) {
        out += csv_escape(r.model) + "," + csv_escape(r.train_set) + "," + csv_escape(r.translation);
        for (const std::string& c : r.cells) out += "," + csv_escape(c);
        out += '\n';
    }
    return out;
}

nlohmann::json report_json(const std::vector<MetricReport>& runs) {
    nlohmann::json rows = nlohmann::json::array();
    for (const MetricReport& r : runs) {
        rows.push_back({{"model", r.meta.model},
                        {"train_set", r.meta.train_set},
                        {"translation", r.meta.translation},
                        {"eval_set", r.meta.eval_set},
                        {"mean", r.mean},
                        {"std", r.std},
                        {"cell", format_cell(r.mean, r.std)},
                        {"frames", r.per_frame.size()}});
    }
    return {{"runs", rows}};
}

double improvement(const std::vector<MetricReport>& runs, const std::string& eval_set,
                   const std::string& model_ours, const std::string& model_baseline) {
    double best_ours = -1.0, best_base = -1.0;
    for (const MetricReport& r : runs) {
        if (r.meta.eval_set != eval_set) continue;
        if (r.meta.model == model_ours) best_ours = std::max(best_ours, r.mean);
        if (r.meta.model == model_baseline) best_base = std::max(best_base, r.mean);
    }
    if (best_ours < 0.0 || best_base < 0.0)
        throw std::invalid_argument("improvement needs both models on eval set '" + eval_set +
                                    "'");
    return best_ours - best_base;
}

std::vector<MetricReport> load_recorded_runs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    std::vector<MetricReport> runs;
    for (const auto& row : j.at("rows")) {
        MetricReport r;
        r.meta.model = row.at("model").get<std::string>();
        r.meta.train_set = row.at("train_set").get<std::string>();
        r.meta.translation = row.value("translation", "N.A.");
        r.meta.eval_set = row.at("eval_set").get<std::string>();
        r.mean = row.at("mean").get<double>();
        r.std = row.at("std").get<double>();
        runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<DatasetPreset> load_dataset_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    std::vector<DatasetPreset> out;
    for (const auto& d : j.at("datasets")) {
        DatasetPreset p;
        p.name = d.at("name").get<std::string>();
        p.train_frames = d.value("train_frames", 0);
        p.test_frames = d.value("test_frames", 0);
        p.simulated = d.value("simulated", false);
        p.has_fold_labels = d.value("has_fold_labels", false);
        p.has_depth = d.value("has_depth", false);
        p.has_manual_annotations = d.value("has_manual_annotations", false);
        p.notes = d.value("notes", "");
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace folds::eval
