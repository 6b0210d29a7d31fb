#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "repshift/png_io.hpp"
#include "repshift/rng.hpp"

namespace repshift::test {

namespace {

// smooth value noise: bilinear interpolation of a seeded coarse lattice
class ValueNoise {
public:
    ValueNoise(std::uint64_t seed, int width, int height, int spacing) : spacing_(spacing) {
        cols_ = width / spacing + 2;
        rows_ = height / spacing + 2;
        lattice_.resize(static_cast<std::size_t>(cols_) * rows_);
        Xoshiro256 rng(seed);
        for (double& v : lattice_) v = rng.next_double();
    }

    double at(int x, int y) const {
        const double gx = static_cast<double>(x) / spacing_;
        const double gy = static_cast<double>(y) / spacing_;
        const int x0 = static_cast<int>(gx), y0 = static_cast<int>(gy);
        const double fx = gx - x0, fy = gy - y0;
        auto l = [&](int cx, int cy) { return lattice_[static_cast<std::size_t>(cy) * cols_ + cx]; };
        const double top = (1 - fx) * l(x0, y0) + fx * l(x0 + 1, y0);
        const double bottom = (1 - fx) * l(x0, y0 + 1) + fx * l(x0 + 1, y0 + 1);
        return (1 - fy) * top + fy * bottom;
    }

private:
    int spacing_, cols_, rows_;
    std::vector<double> lattice_;
};

std::uint8_t byte_of(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

void paint(Scene& scene, int x, int y, double r, double g, double b, std::uint8_t cls) {
    scene.image.at(x, y, 0) = byte_of(r);
    scene.image.at(x, y, 1) = byte_of(g);
    scene.image.at(x, y, 2) = byte_of(b);
    scene.mask.at(x, y) = cls;
}

}  // namespace

Scene synth_scene(std::uint64_t seed, int width, int height) {
    Xoshiro256 rng(seed);
    Scene scene{ImageRaster(width, height), SegMask(width, height)};

    const ValueNoise coarse(mix_seed(seed, 101), width, height, 12);
    const ValueNoise fine(mix_seed(seed, 102), width, height, 3);

    const int horizon = static_cast<int>(height * rng.uniform(0.40, 0.55));
    const double sky_tint = rng.uniform(-12.0, 12.0);
    const double ground_tint = rng.uniform(-15.0, 15.0);

    // sky and ground base layers
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double n = 30.0 * coarse.at(x, y) + 18.0 * fine.at(x, y);
            if (y < horizon) {
                const double t = static_cast<double>(y) / horizon;
                paint(scene, x, y, 120 + 60 * t + sky_tint + 0.3 * n,
                      160 + 45 * t + sky_tint + 0.3 * n, 222 + 20 * t + 0.3 * n, 0);
            } else {
                paint(scene, x, y, 98 + ground_tint + n, 92 + ground_tint + n, 60 + 0.7 * n, 1);
            }
        }
    }

    // buildings: rectangles rising from the horizon
    const int building_count = rng.uniform_int(1, 3);
    for (int i = 0; i < building_count; ++i) {
        const int bw = rng.uniform_int(width / 10, width / 4);
        const int bh = rng.uniform_int(height / 5, horizon - 2);
        const int bx = rng.uniform_int(0, width - bw - 1);
        const double gray = rng.uniform(95.0, 165.0);
        const double warm = rng.uniform(-8.0, 20.0);
        for (int y = horizon - bh; y < horizon; ++y)
            for (int x = bx; x < bx + bw; ++x) {
                const double n = 14.0 * fine.at(x, y);
                paint(scene, x, y, gray + warm + n, gray + n, gray - 6 + n, 2);
            }
    }

    // vegetation: elliptic blobs straddling the horizon
    const int blob_count = rng.uniform_int(1, 3);
    for (int i = 0; i < blob_count; ++i) {
        const int cx = rng.uniform_int(0, width - 1);
        const int cy = horizon + rng.uniform_int(-height / 10, height / 10);
        const int rx = rng.uniform_int(width / 16, width / 7);
        const int ry = rng.uniform_int(height / 12, height / 6);
        const double green = rng.uniform(95.0, 135.0);
        for (int y = std::max(0, cy - ry); y <= std::min(height - 1, cy + ry); ++y)
            for (int x = std::max(0, cx - rx); x <= std::min(width - 1, cx + rx); ++x) {
                const double dx = static_cast<double>(x - cx) / rx;
                const double dy = static_cast<double>(y - cy) / ry;
                if (dx * dx + dy * dy > 1.0) continue;
                const double n = 20.0 * fine.at(x, y);
                paint(scene, x, y, 38 + 0.5 * n, green + n, 40 + 0.4 * n, 3);
            }
    }

    // vehicles: small saturated boxes on the ground
    const int car_count = rng.uniform_int(0, 2);
    for (int i = 0; i < car_count; ++i) {
        const int cw = rng.uniform_int(width / 14, width / 8);
        const int ch = std::max(3, cw / 2);
        const int cx = rng.uniform_int(0, width - cw - 1);
        const int cy = rng.uniform_int(horizon + 1, std::max(horizon + 1, height - ch - 1));
        const bool red = rng.next_double() < 0.5;
        for (int y = cy; y < std::min(height, cy + ch); ++y)
            for (int x = cx; x < cx + cw; ++x) {
                const double n = 10.0 * fine.at(x, y);
                if (red)
                    paint(scene, x, y, 185 + n, 40 + 0.5 * n, 48 + 0.5 * n, 4);
                else
                    paint(scene, x, y, 44 + 0.5 * n, 70 + 0.5 * n, 185 + n, 4);
            }
    }

    return scene;
}

SceneDataset write_scene_dataset(const std::filesystem::path& root, int count,
                                 std::uint64_t seed_base, int width, int height) {
    const auto image_dir = root / "images";
    const auto mask_dir = root / "masks";
    std::filesystem::create_directories(image_dir);
    std::filesystem::create_directories(mask_dir);

    for (int i = 0; i < count; ++i) {
        char stem[16];
        std::snprintf(stem, sizeof stem, "%03d", i);
        const Scene scene = synth_scene(seed_base + static_cast<std::uint64_t>(i), width, height);
        write_image(scene.image, image_dir / (std::string(stem) + ".png"));
        write_mask(scene.mask, mask_dir / (std::string(stem) + ".png"));
    }
    return {load_dataset(image_dir, DatasetKind::images), load_dataset(mask_dir, DatasetKind::masks)};
}

}  // namespace repshift::test
