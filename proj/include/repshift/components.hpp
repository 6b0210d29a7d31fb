#pragma once

#include <vector>

#include "repshift/boxes.hpp"
#include "repshift/image.hpp"

namespace repshift {

struct ComponentExtractionConfig {
    int connectivity = 8;  // 4 or 8
    int min_area = 64;     // components below this are dropped
};

/// Tight bounding boxes of every same-class connected component (ignore
/// label excluded) with area >= min_area, sorted by (class_id, y_min, x_min).
std::vector<LabeledBox> boxes_from_mask(const SegMask& mask, const ComponentExtractionConfig& cfg);

}  // namespace repshift
