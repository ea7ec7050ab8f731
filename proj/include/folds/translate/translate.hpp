#pragma once

#include <string>

#include "folds/data/manifest.hpp"
#include "folds/nn/checkpoint.hpp"
#include "folds/translate/model.hpp"

namespace folds::translate {

// Maps every frame through G; labels and depth are copied unchanged from the
// source frames (structure preservation is the translation's contract, so
// labels transfer by construction). Output manifest records provenance.
data::DatasetManifest translate_dataset(const nn::Checkpoint& ckpt,
                                        const data::DatasetManifest& input,
                                        const std::string& out_dir,
                                        const std::string& split_name = "sim-aug");

}  // namespace folds::translate
