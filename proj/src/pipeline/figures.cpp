#include "folds/pipeline/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "folds/eval/overlay.hpp"
#include "folds/pipeline/runner.hpp"

namespace fs = std::filesystem;

namespace folds::pipeline {
namespace {

// 5x7 bitmap glyphs for the panel labels.
const std::map<char, std::array<uint8_t, 7>> kGlyphs = {
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
};

void draw_label(ImageU8& img, int x0, int y0, char ch) {
    auto it = kGlyphs.find(ch);
    if (it == kGlyphs.end()) return;
    for (int y = -1; y <= 7; ++y)
        for (int x = -1; x <= 5; ++x)
            if (x0 + x >= 0 && x0 + x < img.width && y0 + y >= 0 && y0 + y < img.height)
                for (int c = 0; c < img.channels; ++c) img.at(x0 + x, y0 + y, c) = 0;
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 5; ++x)
            if (it->second[static_cast<size_t>(y)] & (0x10 >> x))
                for (int c = 0; c < img.channels; ++c) img.at(x0 + x, y0 + y, c) = 255;
}

ImageU8 to_rgb(const ImageU8& img) {
    if (img.channels == 3) return img;
    ImageU8 out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y);
    return out;
}

// Uniform-cell grid with 2px separators; each cell carries its column label.
ImageU8 compose_grid(const std::vector<std::vector<ImageU8>>& rows,
                     const std::vector<char>& column_labels) {
    if (rows.empty() || rows[0].empty()) throw std::runtime_error("empty figure grid");
    const int cw = rows[0][0].width, ch = rows[0][0].height;
    const int ncols = static_cast<int>(rows[0].size());
    const int nrows = static_cast<int>(rows.size());
    const int sep = 2;
    ImageU8 out(ncols * cw + (ncols - 1) * sep, nrows * ch + (nrows - 1) * sep, 3);
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < ncols; ++c) {
            ImageU8 cell = to_rgb(rows[static_cast<size_t>(r)][static_cast<size_t>(c)]);
            if (cell.width != cw || cell.height != ch)
                throw std::runtime_error("figure grid cells disagree in size");
            if (c < static_cast<int>(column_labels.size()))
                draw_label(cell, 3, 3, column_labels[static_cast<size_t>(c)]);
            const int ox = c * (cw + sep), oy = r * (ch + sep);
            for (int y = 0; y < ch; ++y)
                for (int x = 0; x < cw; ++x)
                    for (int k = 0; k < 3; ++k) out.at(ox + x, oy + y, k) = cell.at(x, y, k);
        }
    }
    return out;
}

void draw_line(ImageU8& img, int x0, int y0, int x1, int y1,
               const std::array<uint8_t, 3>& color) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && x0 < img.width && y0 >= 0 && y0 < img.height)
            for (int c = 0; c < 3; ++c) img.at(x0, y0, c) = color[static_cast<size_t>(c)];
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

std::string require_info(const LedgerEntry* e, const char* stage, const char* key) {
    if (!e) throw std::runtime_error(std::string("ledger has no completed '") + stage + "' stage");
    if (!e->info.contains(key))
        throw std::runtime_error(std::string(stage) + " ledger entry lacks '" + key + "'");
    const std::string path = e->info.at(key).get<std::string>();
    if (!fs::exists(path))
        throw std::runtime_error(std::string(stage) + " output missing: " + path);
    return path;
}

// latest entry per stage that finished (ok) or was resumed with outputs
const LedgerEntry* usable_entry(const RunLedger& ledger, const std::string& stage) {
    const LedgerEntry* found = nullptr;
    for (const LedgerEntry& e : ledger.entries)
        if (e.stage == stage && (e.status == "ok" || (e.status == "skipped" && !e.outputs.empty())))
            found = &e;
    return found;
}

}  // namespace

ImageU8 translation_grid(const data::DatasetManifest& source,
                         const data::DatasetManifest& translated, int max_pairs) {
    std::map<std::string, const data::FrameRecord*> by_id;
    for (const auto& f : source.frames) by_id[f.id] = &f;
    std::vector<std::vector<ImageU8>> rows;
    for (const auto& f : translated.frames) {
        if (static_cast<int>(rows.size()) >= max_pairs) break;
        auto it = by_id.find(f.id);
        if (it == by_id.end()) continue;
        rows.push_back({io::read_png(source.resolve(it->second->rgb)),
                        io::read_png(translated.resolve(f.rgb))});
    }
    if (rows.empty()) throw std::runtime_error("no shared frame ids between source and translated");
    return compose_grid(rows, {'S', 'T'});
}

ImageU8 plot_csv(const std::string& csv_path, int width, int height) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot read " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV " + csv_path);
    std::vector<std::vector<double>> cols;
    {
        std::stringstream head(line);
        std::string cell;
        while (std::getline(head, cell, ',')) cols.emplace_back();
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        size_t c = 0;
        while (std::getline(row, cell, ',') && c < cols.size()) cols[c++].push_back(std::stod(cell));
    }
    if (cols.size() < 2 || cols[0].empty())
        throw std::runtime_error("CSV " + csv_path + " has no data rows");

    double lo = 0.0, hi = 1e-12;
    for (size_t c = 1; c < cols.size(); ++c)
        for (double v : cols[c]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }

    ImageU8 img(width, height, 3);
    for (auto& p : img.pixels) p = 255;
    const int mx = 12, my = 12;
    draw_line(img, mx, height - my, width - mx, height - my, {96, 96, 96});
    draw_line(img, mx, my, mx, height - my, {96, 96, 96});

    const size_t n = cols[0].size();
    auto px = [&](size_t i) {
        return mx + static_cast<int>((width - 2 * mx - 1) * (n == 1 ? 0.0 : double(i) / double(n - 1)));
    };
    auto py = [&](double v) {
        return height - my - static_cast<int>((height - 2 * my - 1) * (v - lo) / (hi - lo));
    };
    for (size_t c = 1; c < cols.size(); ++c) {
        const std::array<uint8_t, 3> color = eval::palette_color(static_cast<int>(c));
        for (size_t i = 0; i + 1 < n; ++i)
            draw_line(img, px(i), py(cols[c][i]), px(i + 1), py(cols[c][i + 1]), color);
    }
    return img;
}

std::vector<std::string> emit_figures(const std::string& ledger_path) {
    if (!fs::exists(ledger_path)) throw std::runtime_error("ledger not found: " + ledger_path);
    const RunLedger ledger = RunLedger::load(ledger_path);
    const fs::path root = fs::path(ledger_path).parent_path();
    const fs::path fig_dir = root / "figures";
    fs::create_directories(fig_dir);

    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const ImageU8& img) {
        const std::string p = (fig_dir / name).string();
        io::write_png(p, img);
        files.push_back(p);
    };

    if (const LedgerEntry* tr = usable_entry(ledger, "translate")) {
        const data::DatasetManifest src =
            data::load_manifest(require_info(tr, "translate", "source_manifest"));
        const data::DatasetManifest out =
            data::load_manifest(require_info(tr, "translate", "output_manifest"));
        emit("translation_grid.png", translation_grid(src, out));
    }
    if (const LedgerEntry* tt = usable_entry(ledger, "train-translate"))
        emit("translate_loss.png", plot_csv(require_info(tt, "train-translate", "loss_csv")));
    if (const LedgerEntry* ts = usable_entry(ledger, "train-seg"))
        emit("seg_loss.png", plot_csv(require_info(ts, "train-seg", "loss_csv")));
    if (const LedgerEntry* ev = usable_entry(ledger, "eval")) {
        std::vector<std::vector<ImageU8>> rows;
        for (const auto& f : ev->info.value("frames", nlohmann::json::array())) {
            const std::string rgb = f.at("rgb").get<std::string>();
            const std::string gt = f.at("gt_overlay").get<std::string>();
            const std::string pred = f.at("pred_overlay").get<std::string>();
            for (const std::string& p : {rgb, gt, pred})
                if (!fs::exists(p)) throw std::runtime_error("eval output missing: " + p);
            rows.push_back({io::read_png(rgb), io::read_png(gt), io::read_png(pred)});
        }
        if (!rows.empty()) emit("overlay_grid.png", compose_grid(rows, {'O', 'G', 'P'}));
    }

    if (files.empty()) throw std::runtime_error("ledger has no figure-producing stages");
    return files;
}

}  // namespace folds::pipeline
