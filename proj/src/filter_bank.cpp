#include "repshift/filter_bank.hpp"

#include <stdexcept>

#include "repshift/parallel.hpp"
#include "repshift/png_io.hpp"
#include "repshift/rng.hpp"

namespace repshift {

FilterBank build_filter_bank(std::uint64_t seed, FilterBankConfig config) {
    if (config.channels.empty()) throw std::invalid_argument("filter bank needs at least one layer");
    for (int c : config.channels)
        if (c < 1) throw std::invalid_argument("filter bank layer with zero channels");
    if (config.kernel_size < 1 || config.kernel_size % 2 == 0)
        throw std::invalid_argument("kernel size must be odd and positive");
    if (config.stride < 1) throw std::invalid_argument("stride must be at least 1");

    FilterBank bank;
    bank.seed = seed;
    bank.config = config;

    Xoshiro256 rng(seed);
    const int k = config.kernel_size;
    int in_channels = 3;
    for (int layer = 0; layer < config.n_layers(); ++layer) {
        const int out_channels = config.channels[layer];
        std::vector<float> weights(static_cast<std::size_t>(out_channels) * in_channels * k * k);
        for (float& w : weights)
            w = static_cast<float>(rng.uniform(-1.0 / 9.0, 1.0 / 9.0));
        bank.kernels.push_back(std::move(weights));
        in_channels = out_channels;
    }
    return bank;
}

int conv_output_extent(int input, int kernel_size, int stride) {
    if (input < kernel_size) return 0;
    return (input - kernel_size) / stride + 1;
}

namespace {

// one valid strided cross-correlation + ReLU; input/output channel-major
void conv_layer(const std::vector<float>& input, int in_channels, int in_h, int in_w,
                const std::vector<float>& weights, int out_channels, int k, int stride,
                std::vector<float>& output, int out_h, int out_w) {
    const std::size_t in_plane = static_cast<std::size_t>(in_h) * in_w;
    const std::size_t kernel_sz = static_cast<std::size_t>(in_channels) * k * k;
    for (int oc = 0; oc < out_channels; ++oc) {
        const float* kernel = weights.data() + static_cast<std::size_t>(oc) * kernel_sz;
        float* out_plane = output.data() + static_cast<std::size_t>(oc) * out_h * out_w;
        for (int oy = 0; oy < out_h; ++oy) {
            for (int ox = 0; ox < out_w; ++ox) {
                double acc = 0.0;
                const float* kw = kernel;
                for (int ic = 0; ic < in_channels; ++ic) {
                    const float* plane = input.data() + ic * in_plane;
                    for (int ky = 0; ky < k; ++ky) {
                        const float* row = plane + static_cast<std::size_t>(oy * stride + ky) * in_w +
                                           ox * stride;
                        for (int kx = 0; kx < k; ++kx) acc += static_cast<double>(row[kx]) * kw[kx];
                        kw += k;
                    }
                }
                out_plane[oy * out_w + ox] = acc > 0.0 ? static_cast<float>(acc) : 0.0f;
            }
        }
    }
}

}  // namespace

FeatureMap extract(const FilterBank& bank, const ImageRaster& image) {
    image.validate();
    const int k = bank.config.kernel_size;
    const int stride = bank.config.stride;

    // interleaved bytes -> channel-major [0,1] floats
    int h = image.height, w = image.width;
    std::vector<float> current(static_cast<std::size_t>(3) * h * w);
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    for (std::size_t i = 0; i < plane; ++i)
        for (int c = 0; c < 3; ++c)
            current[c * plane + i] = static_cast<float>(image.pixels[i * 3 + c]) / 255.0f;

    int in_channels = 3;
    for (int layer = 0; layer < bank.config.n_layers(); ++layer) {
        const int out_h = conv_output_extent(h, k, stride);
        const int out_w = conv_output_extent(w, k, stride);
        if (out_h < 1 || out_w < 1)
            throw std::invalid_argument("image smaller than the receptive field at layer " +
                                        std::to_string(layer));
        const int out_channels = bank.config.channels[layer];
        std::vector<float> next(static_cast<std::size_t>(out_channels) * out_h * out_w);
        conv_layer(current, in_channels, h, w, bank.kernels[layer], out_channels, k, stride, next,
                   out_h, out_w);
        current = std::move(next);
        h = out_h;
        w = out_w;
        in_channels = out_channels;
    }

    FeatureMap fm;
    fm.n_channels = in_channels;
    fm.height = h;
    fm.width = w;
    fm.values = std::move(current);
    return fm;
}

std::vector<float> channel_means(const FeatureMap& fm) {
    const std::size_t plane = static_cast<std::size_t>(fm.height) * fm.width;
    std::vector<float> means(fm.n_channels);
    for (int c = 0; c < fm.n_channels; ++c) {
        double acc = 0.0;
        const float* p = fm.values.data() + c * plane;
        for (std::size_t i = 0; i < plane; ++i) acc += p[i];
        means[c] = static_cast<float>(acc / static_cast<double>(plane));
    }
    return means;
}

ChannelMeanMatrix dataset_channel_means(const FilterBank& bank, const DatasetHandle& ds, int jobs) {
    if (ds.kind != DatasetKind::images)
        throw std::invalid_argument("dataset_channel_means expects an image dataset");

    ChannelMeanMatrix m;
    m.n_images = static_cast<std::uint32_t>(ds.size());
    m.n_channels = static_cast<std::uint32_t>(bank.out_channels());
    m.values.resize(static_cast<std::size_t>(m.n_images) * m.n_channels);
    m.source_tag = ds.root.string() + ";builtin-bank;seed=" + std::to_string(bank.seed);

    parallel_for(ds.size(), jobs, [&](std::size_t i) {
        std::vector<float> row;
        try {
            row = channel_means(extract(bank, read_image(ds.path_of(i))));
        } catch (const std::exception& e) {
            throw std::runtime_error("entry '" + ds.entries[i] + "': " + e.what());
        }
        std::copy(row.begin(), row.end(), m.values.begin() + i * m.n_channels);
    });
    return m;
}

}  // namespace repshift
