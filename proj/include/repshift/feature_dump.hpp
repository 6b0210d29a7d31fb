#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace repshift {

/// n_images x n_channels matrix of per-channel mean activations. The rows
/// are one image each; this is the sufficient statistic the shift metric
/// consumes, so dumps stay small even for large datasets.
struct ChannelMeanMatrix {
    std::uint32_t n_images = 0;
    std::uint32_t n_channels = 0;
    std::vector<float> values;  // row-major by image
    std::string source_tag;

    float at(std::size_t image, std::size_t channel) const {
        return values[image * n_channels + channel];
    }
    float& at(std::size_t image, std::size_t channel) {
        return values[image * n_channels + channel];
    }

    void validate() const;
};

// Binary layout, little-endian throughout:
//   magic "WFD1" | u32 n_images | u32 n_channels
//   | n_images*n_channels float32, row-major by image
//   | u16 tag length | UTF-8 tag bytes
ChannelMeanMatrix read_feature_dump(const std::filesystem::path& path);
void write_feature_dump(const ChannelMeanMatrix& matrix, const std::filesystem::path& path);

}  // namespace repshift
