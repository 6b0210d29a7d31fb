#include "repshift/feature_dump.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace repshift {

namespace {

constexpr char kMagic[4] = {'W', 'F', 'D', '1'};

static_assert(std::endian::native == std::endian::little,
              "feature dump IO assumes a little-endian host");
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void check_finite(const ChannelMeanMatrix& m) {
    for (float v : m.values)
        if (!std::isfinite(v)) throw std::invalid_argument("feature dump contains non-finite value");
}

}  // namespace

void ChannelMeanMatrix::validate() const {
    if (n_images < 1 || n_channels < 1)
        throw std::invalid_argument("feature matrix must have at least one image and one channel");
    if (values.size() != static_cast<std::size_t>(n_images) * n_channels)
        throw std::invalid_argument("feature matrix value count does not match declared shape");
    check_finite(*this);
}

ChannelMeanMatrix read_feature_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open feature dump: " + path.string());

    const auto file_size = std::filesystem::file_size(path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad magic in feature dump: " + path.string());

    std::uint32_t n_images = 0, n_channels = 0;
    in.read(reinterpret_cast<char*>(&n_images), 4);
    in.read(reinterpret_cast<char*>(&n_channels), 4);
    if (!in) throw std::runtime_error("truncated feature dump header: " + path.string());
    if (n_images < 1 || n_channels < 1)
        throw std::runtime_error("feature dump declares an empty matrix: " + path.string());

    const std::uint64_t value_count = static_cast<std::uint64_t>(n_images) * n_channels;
    const std::uint64_t min_size = 4 + 4 + 4 + value_count * 4 + 2;
    if (file_size < min_size)
        throw std::runtime_error("feature dump shorter than declared sizes: " + path.string());

    ChannelMeanMatrix m;
    m.n_images = n_images;
    m.n_channels = n_channels;
    m.values.resize(value_count);
    in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(value_count * 4));

    std::uint16_t tag_len = 0;
    in.read(reinterpret_cast<char*>(&tag_len), 2);
    if (!in) throw std::runtime_error("truncated feature dump: " + path.string());
    if (file_size != min_size + tag_len)
        throw std::runtime_error("feature dump length inconsistent with declared sizes: " +
                                 path.string());
    m.source_tag.resize(tag_len);
    in.read(m.source_tag.data(), tag_len);
    if (!in) throw std::runtime_error("truncated feature dump tag: " + path.string());

    check_finite(m);
    return m;
}

void write_feature_dump(const ChannelMeanMatrix& matrix, const std::filesystem::path& path) {
    matrix.validate();
    if (matrix.source_tag.size() > std::numeric_limits<std::uint16_t>::max())
        throw std::invalid_argument("feature dump tag longer than 65535 bytes");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create feature dump: " + path.string());

    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&matrix.n_images), 4);
    out.write(reinterpret_cast<const char*>(&matrix.n_channels), 4);
    out.write(reinterpret_cast<const char*>(matrix.values.data()),
              static_cast<std::streamsize>(matrix.values.size() * 4));
    const std::uint16_t tag_len = static_cast<std::uint16_t>(matrix.source_tag.size());
    out.write(reinterpret_cast<const char*>(&tag_len), 2);
    out.write(matrix.source_tag.data(), tag_len);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace repshift
