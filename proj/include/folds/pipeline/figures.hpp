#pragma once

#include <string>
#include <vector>

#include "folds/core/image.hpp"
#include "folds/data/manifest.hpp"

namespace folds::pipeline {

// Side-by-side grid pairing frames by id: simulated input (S) on the left,
// translated result (T) on the right.
ImageU8 translation_grid(const data::DatasetManifest& source,
                         const data::DatasetManifest& translated, int max_pairs = 4);

// Line chart of every numeric column in the CSV against its first column.
ImageU8 plot_csv(const std::string& csv_path, int width = 640, int height = 360);

// Reads the run ledger, writes translation grids, loss curves and overlay
// grids into <run dir>/figures, and returns the emitted file paths. Throws
// when a referenced stage output is missing.
std::vector<std::string> emit_figures(const std::string& ledger_path);

}  // namespace folds::pipeline
