#include <algorithm>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "folds/eval/report.hpp"

namespace fs = std::filesystem;
using namespace folds;

namespace {

// '*' wildcard match on a single path component
bool glob_match(const std::string& pat, const std::string& s, size_t p = 0, size_t i = 0) {
    while (p < pat.size()) {
        if (pat[p] == '*') {
            for (size_t k = i; k <= s.size(); ++k)
                if (glob_match(pat, s, p + 1, k)) return true;
            return false;
        }
        if (i >= s.size() || pat[p] != s[i]) return false;
        ++p;
        ++i;
    }
    return i == s.size();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    const fs::path pat(pattern);
    const fs::path dir = pat.parent_path().empty() ? "." : pat.parent_path();
    const std::string leaf = pat.filename().string();
    std::vector<std::string> out;
    if (leaf.find('*') == std::string::npos) {
        if (fs::exists(pattern)) out.push_back(pattern);
        return out;
    }
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && glob_match(leaf, entry.path().filename().string()))
            out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assemble metric reports into a comparison table"};
    std::string runs_glob, out_dir, recorded;
    app.add_option("--runs", runs_glob, "glob of per-run metrics JSON files")->required();
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--recorded", recorded, "optional fixture of recorded external result rows");
    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<eval::MetricReport> runs;
        for (const std::string& path : expand_glob(runs_glob))
            runs.push_back(eval::load_metric_report(path));
        if (!recorded.empty())
            for (eval::MetricReport& r : eval::load_recorded_runs(recorded))
                runs.push_back(std::move(r));
        if (runs.empty()) throw std::runtime_error("no metric reports matched " + runs_glob);

        fs::create_directories(out_dir);
        const eval::ReportTable table = eval::build_report(runs);
        std::ofstream((fs::path(out_dir) / "report.txt").string()) << eval::render_text(table);
        std::ofstream((fs::path(out_dir) / "report.csv").string()) << eval::render_csv(table);
        std::ofstream((fs::path(out_dir) / "report.json").string())
            << eval::report_json(runs).dump(2) << "\n";
        std::fputs(eval::render_text(table).c_str(), stdout);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
