#include "repshift/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <csetjmp>
#include <memory>
#include <stdexcept>

namespace repshift {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw std::runtime_error("cannot open file: " + path.string());
    return f;
}

[[noreturn]] void png_error_to_exception(png_structp, png_const_charp msg) {
    throw std::runtime_error(std::string("png: ") + msg);
}

void png_warning_ignore(png_structp, png_const_charp) {}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_exception,
                                     png_warning_ignore);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) {
            png_destroy_read_struct(&png, &info, nullptr);
            throw std::runtime_error("png: cannot allocate read structs");
        }
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_exception,
                                      png_warning_ignore);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) {
            png_destroy_write_struct(&png, &info);
            throw std::runtime_error("png: cannot allocate write structs");
        }
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

void check_signature(std::FILE* f, const std::filesystem::path& path) {
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw std::runtime_error("not a PNG file: " + path.string());
    std::rewind(f);
}

void read_rows(png_structp png, std::uint8_t* data, int height, std::size_t row_bytes) {
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = data + static_cast<std::size_t>(y) * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
}

}  // namespace

ImageRaster read_image(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    check_signature(f.get(), path);

    PngReader r;
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    const int bit_depth = png_get_bit_depth(r.png, r.info);
    if (bit_depth == 16) throw std::runtime_error("unsupported bit depth: 16 (" + path.string() + ")");
    const int color_type = png_get_color_type(r.png, r.info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
        png_set_gray_to_rgb(r.png);
    }
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    png_set_strip_alpha(r.png);
    if (bit_depth < 8) png_set_packing(r.png);
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));
    if (png_get_channels(r.png, r.info) != 3)
        throw std::runtime_error("unsupported channel layout: " + path.string());

    ImageRaster img(width, height);
    read_rows(r.png, img.pixels.data(), height, static_cast<std::size_t>(width) * 3);
    return img;
}

void write_image(const ImageRaster& image, const std::filesystem::path& path) {
    image.validate();
    FilePtr f = open_file(path, "wb");

    PngWriter w;
    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);

    const std::size_t row_bytes = static_cast<std::size_t>(image.width) * 3;
    for (int y = 0; y < image.height; ++y)
        png_write_row(w.png, const_cast<png_bytep>(image.pixels.data() + y * row_bytes));
    png_write_end(w.png, nullptr);
}

SegMask read_mask(const std::filesystem::path& path, int num_classes) {
    FilePtr f = open_file(path, "rb");
    check_signature(f.get(), path);

    PngReader r;
    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);

    const int bit_depth = png_get_bit_depth(r.png, r.info);
    if (bit_depth == 16) throw std::runtime_error("unsupported bit depth: 16 (" + path.string() + ")");
    const int color_type = png_get_color_type(r.png, r.info);
    if (color_type != PNG_COLOR_TYPE_GRAY)
        throw std::runtime_error("mask must be a single-channel raster: " + path.string());
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));

    SegMask mask(width, height);
    read_rows(r.png, mask.labels.data(), height, static_cast<std::size_t>(width));
    mask.validate(num_classes);
    return mask;
}

void write_mask(const SegMask& mask, const std::filesystem::path& path) {
    if (mask.labels.size() != static_cast<std::size_t>(mask.width) * mask.height)
        throw std::invalid_argument("mask label buffer size does not match dimensions");
    FilePtr f = open_file(path, "wb");

    PngWriter w;
    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, mask.width, mask.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < mask.height; ++y)
        png_write_row(w.png, const_cast<png_bytep>(mask.labels.data() +
                                                   static_cast<std::size_t>(y) * mask.width));
    png_write_end(w.png, nullptr);
}

}  // namespace repshift
