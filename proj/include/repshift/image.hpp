#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace repshift {

/// 8-bit RGB raster, row-major, tightly packed (R,G,B per pixel).
struct ImageRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    ImageRaster() = default;
    ImageRaster(int w, int h) : width(w), height(h) {
        check_dims(w, h);
        pixels.assign(static_cast<std::size_t>(w) * h * 3, 0);
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    void validate() const {
        check_dims(width, height);
        if (pixels.size() != pixel_count() * 3)
            throw std::invalid_argument("image pixel buffer size does not match dimensions");
    }

    bool operator==(const ImageRaster&) const = default;

private:
    static void check_dims(int w, int h) {
        if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be at least 1x1");
    }
};

constexpr std::uint8_t kIgnoreLabel = 255;

/// Per-pixel class ids, 0..num_classes-1 plus 255 = ignore.
struct SegMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;

    SegMask() = default;
    SegMask(int w, int h, std::uint8_t fill = kIgnoreLabel) : width(w), height(h) {
        if (w < 1 || h < 1) throw std::invalid_argument("mask dimensions must be at least 1x1");
        labels.assign(static_cast<std::size_t>(w) * h, fill);
    }

    std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }

    void validate(int num_classes) const {
        if (width < 1 || height < 1) throw std::invalid_argument("mask dimensions must be at least 1x1");
        if (labels.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("mask label buffer size does not match dimensions");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const int v = labels[i];
            if (v != kIgnoreLabel && v >= num_classes)
                throw std::invalid_argument("mask label " + std::to_string(v) + " out of range 0.." +
                                            std::to_string(num_classes - 1) + " at pixel index " +
                                            std::to_string(i));
        }
    }

    bool operator==(const SegMask&) const = default;
};

}  // namespace repshift
