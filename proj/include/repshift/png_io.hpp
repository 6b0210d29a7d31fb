#pragma once

#include <filesystem>

#include "repshift/image.hpp"

namespace repshift {

/// Reads an 8-bit RGB raster. Grayscale and paletted files are expanded to
/// RGB, an alpha channel is dropped. 16-bit files are rejected.
ImageRaster read_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. write_image followed by read_image is
/// bit-identical on the pixel buffer.
void write_image(const ImageRaster& image, const std::filesystem::path& path);

/// Reads a single-channel 8-bit raster and validates every label against
/// num_classes (255 = ignore is always allowed).
SegMask read_mask(const std::filesystem::path& path, int num_classes);

/// Writes a single-channel 8-bit PNG.
void write_mask(const SegMask& mask, const std::filesystem::path& path);

}  // namespace repshift
