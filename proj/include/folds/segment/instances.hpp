#pragma once

#include "folds/core/image.hpp"

namespace folds::segment {

// 4-connected components of the binary mask (any nonzero pixel counts as
// foreground). Ids are 1..K ordered by decreasing area; equal areas break by
// first pixel in scan order. Components smaller than min_area are dropped.
ImageU16 extract_instances(const ImageU8& binary, int min_area = 50);

}  // namespace folds::segment
