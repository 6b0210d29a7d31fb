#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repshift/dataset.hpp"
#include "repshift/feature_dump.hpp"
#include "repshift/image.hpp"

namespace repshift {

struct FilterBankConfig {
    int kernel_size = 3;
    int stride = 2;
    std::vector<int> channels = {32, 64};  // one entry per layer

    int n_layers() const { return static_cast<int>(channels.size()); }
};

/// Rectified random convolutional features. The kernels are a pure function
/// of (seed, config): weights are drawn uniform in [-1/9, 1/9] from
/// xoshiro256** in (layer, out channel, in channel, ky, kx) order, so banks
/// are bit-identical across platforms and runs.
struct FilterBank {
    std::uint64_t seed = 0;
    FilterBankConfig config;
    // per layer: out_channels * in_channels * k * k weights
    std::vector<std::vector<float>> kernels;

    int out_channels() const { return config.channels.back(); }
};

FilterBank build_filter_bank(std::uint64_t seed, FilterBankConfig config = {});

struct FeatureMap {
    int n_channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> values;  // channel-major: c * (h*w) + y*w + x

    float at(int c, int y, int x) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

/// Output spatial size of one valid strided convolution pass.
int conv_output_extent(int input, int kernel_size, int stride);

/// Valid-region strided cross-correlation per layer, input scaled to [0,1],
/// rectified after every layer.
FeatureMap extract(const FilterBank& bank, const ImageRaster& image);

/// Arithmetic mean of each channel, accumulated in 64-bit.
std::vector<float> channel_means(const FeatureMap& fm);

/// One matrix row per dataset entry, in entry order regardless of how the
/// work is scheduled across jobs.
ChannelMeanMatrix dataset_channel_means(const FilterBank& bank, const DatasetHandle& ds,
                                        int jobs = 1);

}  // namespace repshift
