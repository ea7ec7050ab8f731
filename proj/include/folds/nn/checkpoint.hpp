#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "folds/core/tensor.hpp"

namespace folds::nn {

// Self-describing checkpoint container shared by the translation and
// segmentation trainers: JSON metadata (format version, architecture config,
// step counter, seed) followed by named float tensor blobs.
struct Checkpoint {
    nlohmann::json meta;
    std::vector<std::pair<std::string, Tensor>> tensors;

    void add(const std::string& name, const Tensor& t) { tensors.emplace_back(name, t); }
    const Tensor* find(const std::string& name) const;
    const Tensor& require(const std::string& name) const;  // throws when missing

    // Write-temp-then-rename.
    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

}  // namespace folds::nn
