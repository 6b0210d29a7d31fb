#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "repshift/dataset.hpp"
#include "repshift/image.hpp"

namespace repshift {

struct LowFreqParams {
    double beta = 0.01;  // half-width of the exchanged window as a fraction of min(H,W)
};

/// Replaces the amplitude spectrum of the target inside the centered square
/// window of half-width floor(beta*min(H,W)) with the source's amplitude;
/// target phase is retained everywhere. The source is bilinearly resized to
/// the target dimensions first.
ImageRaster lowfreq_exchange(const ImageRaster& target, const ImageRaster& source,
                             const LowFreqParams& params);

/// Brightness/contrast/saturation jitter with factors uniform in
/// [1-strength, 1+strength], drawn in that order from the seeded generator.
ImageRaster color_augment(const ImageRaster& img, double strength, std::uint64_t seed);

/// Each output pixel copies an input pixel displaced by integer offsets
/// uniform in [-radius, radius]^2, clamped to bounds.
ImageRaster frosted_glass(const ImageRaster& img, int radius, std::uint64_t seed);

/// Uniform color quantization to `levels` values per channel; idempotent.
ImageRaster poster(const ImageRaster& img, int levels);

/// Box blur of the given radius followed by poster(levels).
ImageRaster mural(const ImageRaster& img, int smooth_radius, int levels);

ImageRaster resize_bilinear(const ImageRaster& img, int new_width, int new_height);

enum class AugmentKind { lowfreq_exchange, color, frosted_glass, poster, mural };

/// One augmentation op; a pure function of (input, optional reference image,
/// params, seed).
struct AugmentationOp {
    AugmentKind kind = AugmentKind::color;
    double beta = 0.01;     // lowfreq_exchange
    double strength = 0.0;  // color
    int radius = 1;         // frosted_glass displacement / mural smooth radius
    int levels = 8;         // poster / mural

    bool needs_reference() const { return kind == AugmentKind::lowfreq_exchange; }
    bool is_stochastic() const {
        return kind == AugmentKind::color || kind == AugmentKind::frosted_glass;
    }
};

/// Parses the op grammar: lowfreq:beta=0.01  color:strength=0.4
/// frosted:radius=4  poster:levels=8  mural:radius=3,levels=8
AugmentationOp parse_op_spec(const std::string& spec);

/// Canonical spec string for an op (parse_op_spec round-trips it).
std::string op_descriptor(const AugmentationOp& op);

ImageRaster apply_op(const AugmentationOp& op, const ImageRaster& img, const ImageRaster* reference,
                     std::uint64_t seed);

/// Applies op to every image of tgt, writing PNGs under out_root with the
/// same stems. For lowfreq_exchange the reference image is drawn uniformly
/// from src by a generator seeded with (seed, image index), so output bytes
/// do not depend on scheduling.
DatasetHandle apply_to_dataset(const AugmentationOp& op, const DatasetHandle& tgt,
                               const DatasetHandle* src, const std::filesystem::path& out_root,
                               std::uint64_t seed, int jobs = 1);

}  // namespace repshift
