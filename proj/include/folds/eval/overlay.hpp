#pragma once

#include <array>

#include "folds/core/image.hpp"
#include "folds/eval/matching.hpp"

namespace folds::eval {

// Fixed palette keyed by ground-truth instance id (1-based).
std::array<uint8_t, 3> palette_color(int gt_id);

// Alpha-blends predicted instances over the image: a matched instance takes
// the palette color of its ground-truth partner, unmatched predictions are
// white. Pixels with no prediction pass through unchanged.
ImageU8 render_overlay(const ImageU8& image, const ImageU16& pred,
                       const MatchResult& match, float alpha = 0.5f);

}  // namespace folds::eval
