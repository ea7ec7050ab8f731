#include <cstdlib>

#include <CLI11.hpp>

#include "folds/pipeline/figures.hpp"
#include "folds/pipeline/runner.hpp"

using namespace folds;

int main(int argc, char** argv) {
    CLI::App app{
        "Config-driven pipeline driver.\n"
        "Environment overrides: FOLDS_OUTPUT_ROOT replaces the config's output_root;\n"
        "FOLDS_THREADS is accepted for compatibility (execution is single-threaded).\n"
        "Exit codes: 0 success, 1 validation error, 2 stage failure."};
    app.require_subcommand(1);

    std::string config_path, ledger_path;
    bool resume = false;
    CLI::App* run = app.add_subcommand("run", "run the enabled stages in dependency order");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_flag("--resume", resume, "skip completed stages whose config hash matches");
    CLI::App* figures = app.add_subcommand("figures", "emit figures from a completed run");
    figures->add_option("--ledger", ledger_path, "run ledger (ledger.jsonl)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            pipeline::ExperimentConfig cfg = pipeline::ExperimentConfig::load(config_path);
            if (const char* root = std::getenv("FOLDS_OUTPUT_ROOT")) cfg.output_root = root;
            pipeline::RunLedger ledger = pipeline::PipelineRunner(std::move(cfg)).run(resume);
            for (const pipeline::LedgerEntry& e : ledger.entries)
                std::printf("%-16s %-8s %8.2fs\n", e.stage.c_str(), e.status.c_str(), e.seconds);
        } else {
            for (const std::string& f : pipeline::emit_figures(ledger_path))
                std::printf("%s\n", f.c_str());
        }
    } catch (const pipeline::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
