#pragma once

#include <vector>

#include "folds/core/image.hpp"

namespace folds::eval {

struct InstanceMatch {
    int pred_id = 0;
    int gt_id = 0;
    double iou = 0.0;
};

struct MatchResult {
    std::vector<InstanceMatch> matches;
    std::vector<int> unmatched_pred;
    std::vector<int> unmatched_gt;
};

// Greedy one-to-one matching in decreasing pairwise-IoU order; pairs below
// tau never match. Ties break on lower gt id, then lower pred id. Unmatched
// prediction ids are what the overlay renders white.
MatchResult match_instances(const ImageU16& pred, const ImageU16& gt, double tau = 0.5);

}  // namespace folds::eval
