#pragma once

#include <string>
#include <vector>

#include "folds/core/tensor.hpp"
#include "folds/data/manifest.hpp"

namespace folds::segment {

// A batch of (sim image, translated image, shared mask) triples, stacked
// along the batch dimension: sim/aug are [B,C,H,W], mask is [B,1,H,W] in
// {0,1}. Both texture variants of a frame always co-occur in one batch.
struct PairedBatch {
    std::vector<std::string> frame_ids;
    Tensor sim;
    Tensor aug;
    Tensor mask;
};

struct PairedBatchConfig {
    int triples_per_batch = 8;
    int image_size = 256;
    uint64_t seed = 0;
    bool augment = false;  // flips and +/-10 degree rotations, pair-consistent
};

// Loads both manifests into memory and yields seeded-permutation epochs.
// Throws when the manifests' frame id sets differ (missing ids listed).
class PairedBatchStream {
public:
    PairedBatchStream(const data::DatasetManifest& sim, const data::DatasetManifest& aug,
                      const PairedBatchConfig& cfg);

    int frame_count() const { return static_cast<int>(ids_.size()); }
    int batches_per_epoch() const;

    // Deterministic function of (seed, epoch).
    std::vector<PairedBatch> epoch(int epoch_index) const;

private:
    PairedBatchConfig cfg_;
    std::vector<std::string> ids_;
    std::vector<Tensor> sim_images_, aug_images_, masks_;
};

}  // namespace folds::segment
