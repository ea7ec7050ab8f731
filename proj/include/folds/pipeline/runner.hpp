#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "folds/pipeline/config.hpp"

namespace folds::pipeline {

inline constexpr const char* kCodeVersion = "folds-0.1.0";

struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LedgerEntry {
    std::string stage;
    std::string status;  // "ok", "failed", "skipped"
    double seconds = 0.0;
    std::vector<std::string> outputs;
    nlohmann::json info;  // named artifact paths for the figure emitter
    std::string config_hash;
    std::string code_version = kCodeVersion;

    nlohmann::json to_json() const;
    static LedgerEntry from_json(const nlohmann::json& j);
};

// Append-only JSON-lines file at <output_root>/ledger.jsonl. On resume a
// completed stage is skipped only when its recorded config hash matches.
struct RunLedger {
    std::string path;
    std::vector<LedgerEntry> entries;

    void append(const LedgerEntry& e);
    static RunLedger load(const std::string& path);  // empty ledger when absent
    const LedgerEntry* last_ok(const std::string& stage) const;
};

class PipelineRunner {
public:
    explicit PipelineRunner(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}

    // Runs the enabled stages in dependency order. Throws StageError on the
    // first failure after recording it in the ledger.
    RunLedger run(bool resume);

    const ExperimentConfig& config() const { return cfg_; }

private:
    LedgerEntry run_gen_data();
    LedgerEntry run_train_translate();
    LedgerEntry run_translate();
    LedgerEntry run_train_seg();
    LedgerEntry run_eval();
    LedgerEntry run_report();

    std::string manifest_path(const std::string& dataset_name) const;

    ExperimentConfig cfg_;
};

}  // namespace folds::pipeline
