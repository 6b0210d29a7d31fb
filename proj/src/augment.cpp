#include "repshift/augment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "repshift/fft.hpp"
#include "repshift/parallel.hpp"
#include "repshift/png_io.hpp"
#include "repshift/rng.hpp"

namespace repshift {

namespace {

// ties to even, matching the byte-exactness contract of every operator
std::uint8_t to_byte(double v) {
    v = std::clamp(v, 0.0, 255.0);
    return static_cast<std::uint8_t>(std::nearbyint(v));
}

}  // namespace

ImageRaster resize_bilinear(const ImageRaster& img, int new_width, int new_height) {
    img.validate();
    if (new_width < 1 || new_height < 1)
        throw std::invalid_argument("resize target must be at least 1x1");
    if (new_width == img.width && new_height == img.height) return img;

    ImageRaster out(new_width, new_height);
    const double scale_x = static_cast<double>(img.width) / new_width;
    const double scale_y = static_cast<double>(img.height) / new_height;
    for (int y = 0; y < new_height; ++y) {
        const double sy = std::max(0.0, (y + 0.5) * scale_y - 0.5);
        const int y0 = std::min(static_cast<int>(sy), img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - y0;
        for (int x = 0; x < new_width; ++x) {
            const double sx = std::max(0.0, (x + 0.5) * scale_x - 0.5);
            const int x0 = std::min(static_cast<int>(sx), img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = (1.0 - fx) * img.at(x0, y0, c) + fx * img.at(x1, y0, c);
                const double bottom = (1.0 - fx) * img.at(x0, y1, c) + fx * img.at(x1, y1, c);
                out.at(x, y, c) = to_byte((1.0 - fy) * top + fy * bottom);
            }
        }
    }
    return out;
}

ImageRaster lowfreq_exchange(const ImageRaster& target, const ImageRaster& source,
                             const LowFreqParams& params) {
    target.validate();
    source.validate();
    if (!(params.beta > 0.0 && params.beta <= 0.5))
        throw std::invalid_argument("beta must be in (0, 0.5]");

    const int h = target.height, w = target.width;
    const int half_width = static_cast<int>(params.beta * std::min(h, w));
    if (half_width < 1) throw std::invalid_argument("beta too small for image size");

    const ImageRaster src = resize_bilinear(source, w, h);

    // signed frequency offset of an unshifted index; the centered window in
    // the shifted spectrum is exactly |offset| <= half_width
    auto offset = [](int idx, int extent) {
        return idx < (extent + 1) / 2 ? idx : idx - extent;
    };

    const std::size_t plane = static_cast<std::size_t>(h) * w;
    ImageRaster out(w, h);
    std::vector<std::complex<double>> ft(plane), fs(plane);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane; ++i) {
            ft[i] = static_cast<double>(target.pixels[i * 3 + c]);
            fs[i] = static_cast<double>(src.pixels[i * 3 + c]);
        }
        fft_2d(ft.data(), h, w, false);
        fft_2d(fs.data(), h, w, false);

        for (int v = 0; v < h; ++v) {
            if (std::abs(offset(v, h)) > half_width) continue;
            for (int u = 0; u < w; ++u) {
                if (std::abs(offset(u, w)) > half_width) continue;
                std::complex<double>& t = ft[static_cast<std::size_t>(v) * w + u];
                const double amp_src = std::abs(fs[static_cast<std::size_t>(v) * w + u]);
                const double amp_tgt = std::abs(t);
                // keep target phase; zero target amplitude has no phase, use 0
                t = amp_tgt > 0.0 ? t * (amp_src / amp_tgt) : std::complex<double>(amp_src, 0.0);
            }
        }

        fft_2d(ft.data(), h, w, true);
        for (std::size_t i = 0; i < plane; ++i) out.pixels[i * 3 + c] = to_byte(ft[i].real());
    }
    return out;
}

ImageRaster color_augment(const ImageRaster& img, double strength, std::uint64_t seed) {
    img.validate();
    if (!(strength >= 0.0 && strength <= 1.0))
        throw std::invalid_argument("color strength must be in [0, 1]");

    Xoshiro256 rng(seed);
    const double brightness = rng.uniform(1.0 - strength, 1.0 + strength);
    const double contrast = rng.uniform(1.0 - strength, 1.0 + strength);
    const double saturation = rng.uniform(1.0 - strength, 1.0 + strength);

    ImageRaster out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double adjusted[3];
        for (int c = 0; c < 3; ++c) {
            const double v = ((img.pixels[i * 3 + c] - 128.0) * contrast + 128.0) * brightness;
            adjusted[c] = std::clamp(v, 0.0, 255.0);
        }
        const double luma = 0.299 * adjusted[0] + 0.587 * adjusted[1] + 0.114 * adjusted[2];
        for (int c = 0; c < 3; ++c)
            out.pixels[i * 3 + c] = to_byte(saturation * adjusted[c] + (1.0 - saturation) * luma);
    }
    return out;
}

ImageRaster frosted_glass(const ImageRaster& img, int radius, std::uint64_t seed) {
    img.validate();
    if (radius < 1) throw std::invalid_argument("frosted glass radius must be at least 1");
    if (radius >= std::min(img.width, img.height) / 2)
        throw std::invalid_argument("frosted glass radius must be below min(H,W)/2");

    Xoshiro256 rng(seed);
    ImageRaster out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int dx = rng.uniform_int(-radius, radius);
            const int dy = rng.uniform_int(-radius, radius);
            const int sx = std::clamp(x + dx, 0, img.width - 1);
            const int sy = std::clamp(y + dy, 0, img.height - 1);
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, sy, c);
        }
    }
    return out;
}

ImageRaster poster(const ImageRaster& img, int levels) {
    img.validate();
    if (levels < 2 || levels > 32) throw std::invalid_argument("poster levels must be in 2..32");

    // 256-entry map; quantizer is idempotent by construction
    std::uint8_t map[256];
    const double step = (levels - 1) / 255.0;
    for (int v = 0; v < 256; ++v) {
        const double q = std::nearbyint(v * step);
        map[v] = to_byte(q * 255.0 / (levels - 1));
    }

    ImageRaster out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.pixels[i] = map[img.pixels[i]];
    return out;
}

namespace {

// separable border-clamped box mean; window counts factor per axis, so the
// two passes compose exactly
std::vector<double> box_blur_plane(const std::vector<double>& in, int w, int h, int radius) {
    std::vector<double> mid(in.size()), out(in.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
            double sum = 0.0;
            for (int xi = x0; xi <= x1; ++xi) sum += in[static_cast<std::size_t>(y) * w + xi];
            mid[static_cast<std::size_t>(y) * w + x] = sum / (x1 - x0 + 1);
        }
    }
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int yi = y0; yi <= y1; ++yi) sum += mid[static_cast<std::size_t>(yi) * w + x];
            out[static_cast<std::size_t>(y) * w + x] = sum / (y1 - y0 + 1);
        }
    }
    return out;
}

}  // namespace

ImageRaster mural(const ImageRaster& img, int smooth_radius, int levels) {
    img.validate();
    if (smooth_radius < 1) throw std::invalid_argument("mural smooth radius must be at least 1");

    ImageRaster blurred(img.width, img.height);
    std::vector<double> plane(img.pixel_count());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.pixels[i * 3 + c];
        const std::vector<double> smoothed = box_blur_plane(plane, img.width, img.height, smooth_radius);
        for (std::size_t i = 0; i < plane.size(); ++i) blurred.pixels[i * 3 + c] = to_byte(smoothed[i]);
    }
    return poster(blurred, levels);
}

namespace {

double parse_number(const std::string& text, const std::string& spec) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value '" + text + "' in op spec: " + spec);
    }
}

int parse_int(const std::string& text, const std::string& spec) {
    const double v = parse_number(text, spec);
    if (v != std::floor(v)) throw std::invalid_argument("expected integer in op spec: " + spec);
    return static_cast<int>(v);
}

}  // namespace

AugmentationOp parse_op_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<std::pair<std::string, std::string>> kv;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(pos, comma - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::invalid_argument("expected key=value in op spec: " + spec);
            kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            pos = comma + 1;
        }
    }

    AugmentationOp op;
    auto expect_keys = [&](std::initializer_list<const char*> keys) {
        for (const auto& [key, value] : kv) {
            bool known = false;
            for (const char* k : keys) known |= key == k;
            if (!known) throw std::invalid_argument("unknown parameter '" + key + "' in op spec: " + spec);
        }
    };

    if (name == "lowfreq") {
        op.kind = AugmentKind::lowfreq_exchange;
        expect_keys({"beta"});
        for (const auto& [key, value] : kv) op.beta = parse_number(value, spec);
        if (!(op.beta > 0.0 && op.beta <= 0.5))
            throw std::invalid_argument("beta must be in (0, 0.5]: " + spec);
    } else if (name == "color") {
        op.kind = AugmentKind::color;
        expect_keys({"strength"});
        for (const auto& [key, value] : kv) op.strength = parse_number(value, spec);
        if (!(op.strength >= 0.0 && op.strength <= 1.0))
            throw std::invalid_argument("strength must be in [0, 1]: " + spec);
    } else if (name == "frosted") {
        op.kind = AugmentKind::frosted_glass;
        expect_keys({"radius"});
        for (const auto& [key, value] : kv) op.radius = parse_int(value, spec);
        if (op.radius < 1) throw std::invalid_argument("radius must be at least 1: " + spec);
    } else if (name == "poster") {
        op.kind = AugmentKind::poster;
        expect_keys({"levels"});
        for (const auto& [key, value] : kv) op.levels = parse_int(value, spec);
        if (op.levels < 2 || op.levels > 32)
            throw std::invalid_argument("levels must be in 2..32: " + spec);
    } else if (name == "mural") {
        op.kind = AugmentKind::mural;
        op.radius = 3;
        expect_keys({"radius", "levels"});
        for (const auto& [key, value] : kv) {
            if (key == "radius") op.radius = parse_int(value, spec);
            if (key == "levels") op.levels = parse_int(value, spec);
        }
        if (op.radius < 1) throw std::invalid_argument("radius must be at least 1: " + spec);
        if (op.levels < 2 || op.levels > 32)
            throw std::invalid_argument("levels must be in 2..32: " + spec);
    } else {
        throw std::invalid_argument("unknown augmentation op '" + name + "'");
    }
    return op;
}

std::string op_descriptor(const AugmentationOp& op) {
    auto fmt = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    switch (op.kind) {
        case AugmentKind::lowfreq_exchange: return "lowfreq:beta=" + fmt(op.beta);
        case AugmentKind::color: return "color:strength=" + fmt(op.strength);
        case AugmentKind::frosted_glass: return "frosted:radius=" + std::to_string(op.radius);
        case AugmentKind::poster: return "poster:levels=" + std::to_string(op.levels);
        case AugmentKind::mural:
            return "mural:radius=" + std::to_string(op.radius) + ",levels=" + std::to_string(op.levels);
    }
    throw std::logic_error("unreachable");
}

ImageRaster apply_op(const AugmentationOp& op, const ImageRaster& img, const ImageRaster* reference,
                     std::uint64_t seed) {
    switch (op.kind) {
        case AugmentKind::lowfreq_exchange:
            if (!reference)
                throw std::invalid_argument("lowfreq exchange requires a reference image");
            return lowfreq_exchange(img, *reference, LowFreqParams{op.beta});
        case AugmentKind::color: return color_augment(img, op.strength, seed);
        case AugmentKind::frosted_glass: return frosted_glass(img, op.radius, seed);
        case AugmentKind::poster: return poster(img, op.levels);
        case AugmentKind::mural: return mural(img, op.radius, op.levels);
    }
    throw std::logic_error("unreachable");
}

DatasetHandle apply_to_dataset(const AugmentationOp& op, const DatasetHandle& tgt,
                               const DatasetHandle* src, const std::filesystem::path& out_root,
                               std::uint64_t seed, int jobs) {
    if (op.needs_reference() && (src == nullptr || src->size() == 0))
        throw std::invalid_argument("op '" + op_descriptor(op) + "' requires a reference dataset");
    std::filesystem::create_directories(out_root);

    parallel_for(tgt.size(), jobs, [&](std::size_t i) {
        try {
            const ImageRaster img = read_image(tgt.path_of(i));
            const std::uint64_t image_seed = mix_seed(seed, i);
            ImageRaster result;
            if (op.needs_reference()) {
                Xoshiro256 pick(image_seed);
                const ImageRaster ref = read_image(src->path_of(pick.below(src->size())));
                result = apply_op(op, img, &ref, image_seed);
            } else {
                result = apply_op(op, img, nullptr, image_seed);
            }
            write_image(result, out_root / (tgt.entries[i] + ".png"));
        } catch (const std::exception& e) {
            throw std::runtime_error("entry '" + tgt.entries[i] + "': " + e.what());
        }
    });
    return load_dataset(out_root, DatasetKind::images);
}

}  // namespace repshift
