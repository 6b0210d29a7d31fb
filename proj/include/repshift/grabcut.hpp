#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repshift/boxes.hpp"
#include "repshift/image.hpp"

namespace repshift {

struct GrabCutConfig {
    int gmm_components = 5;
    int max_iterations = 5;
    double gamma = 50.0;           // pairwise smoothness weight
    double convergence_eps = 1e-3; // relative energy decrease threshold
    std::uint64_t seed = 0;
};

struct GrabCutResult {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> foreground;     // H*W, 1 = foreground
    std::vector<double> iteration_energies;   // graph-cut energy after each min-cut

    bool is_foreground(int x, int y) const {
        return foreground[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

/// Box-initialized iterative foreground extraction: alternating GMM color
/// models and a contrast-sensitive min-cut. Pixels outside the box are
/// definite background and never turn up as foreground.
GrabCutResult grabcut_box(const ImageRaster& img, const LabeledBox& box, const GrabCutConfig& cfg);

/// Runs grabcut_box per box and composites the class maps painting larger
/// boxes first, so the smaller (assumed in-front) box wins overlaps; equal
/// areas are won by the earlier box in the input list. Pixels claimed by no
/// foreground stay 255.
SegMask pseudo_label(const ImageRaster& img, std::span<const LabeledBox> boxes,
                     const GrabCutConfig& cfg, int num_classes = 19);

}  // namespace repshift
