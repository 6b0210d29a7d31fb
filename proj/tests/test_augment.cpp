#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "repshift/augment.hpp"
#include "repshift/png_io.hpp"
#include "repshift/rng.hpp"
#include "support/fixtures.hpp"

using namespace repshift;
namespace fs = std::filesystem;

namespace {

ImageRaster random_image(std::uint64_t seed, int w, int h) {
    Xoshiro256 rng(seed);
    ImageRaster img(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

ImageRaster constant_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageRaster img(w, h);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.pixels[i * 3] = r;
        img.pixels[i * 3 + 1] = g;
        img.pixels[i * 3 + 2] = b;
    }
    return img;
}

int max_channel_delta(const ImageRaster& a, const ImageRaster& b) {
    int worst = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        worst = std::max(worst, std::abs(int(a.pixels[i]) - int(b.pixels[i])));
    return worst;
}

}  // namespace

TEST_CASE("lowfreq self-exchange is the identity up to rounding") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const ImageRaster img = random_image(seed, 40, 28);
        for (double beta : {0.05, 0.2, 0.5}) {
            const ImageRaster out = lowfreq_exchange(img, img, {beta});
            CHECK(out.width == img.width);
            CHECK(out.height == img.height);
            CHECK(max_channel_delta(out, img) <= 1);
        }
    }
}

TEST_CASE("lowfreq full-spectrum window on constant images transplants the level") {
    // constant images put all energy at DC; with the window covering DC the
    // target takes the source's amplitude and keeps its (zero) phase
    const ImageRaster source = constant_image(16, 16, 200, 200, 200);
    const ImageRaster target = constant_image(16, 16, 50, 50, 50);
    const ImageRaster out = lowfreq_exchange(target, source, {0.5});
    for (std::uint8_t v : out.pixels) CHECK(int(v) == 200);
}

TEST_CASE("lowfreq window too small errors") {
    const ImageRaster img = random_image(4, 30, 30);
    CHECK_THROWS_WITH_AS(lowfreq_exchange(img, img, {0.01}), doctest::Contains("beta too small"),
                         std::invalid_argument);
    CHECK_THROWS_AS(lowfreq_exchange(img, img, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(lowfreq_exchange(img, img, {0.6}), std::invalid_argument);
}

TEST_CASE("lowfreq self-exchange holds on odd and prime dimensions") {
    for (auto [w, h] : std::vector<std::pair<int, int>>{{37, 41}, {25, 33}, {31, 64}}) {
        const ImageRaster img = random_image(100 + w, w, h);
        const ImageRaster out = lowfreq_exchange(img, img, {0.2});
        CHECK(max_channel_delta(out, img) <= 1);
    }
}

TEST_CASE("lowfreq resizes the source to target dimensions") {
    const ImageRaster target = random_image(5, 33, 21);
    const ImageRaster source = random_image(6, 64, 64);
    const ImageRaster out = lowfreq_exchange(target, source, {0.2});
    CHECK(out.width == 33);
    CHECK(out.height == 21);
}

TEST_CASE("color augment") {
    const ImageRaster img = random_image(9, 24, 16);

    SUBCASE("strength zero is the identity for any seed") {
        CHECK(color_augment(img, 0.0, 0) == img);
        CHECK(color_augment(img, 0.0, 12345) == img);
    }
    SUBCASE("deterministic per (image, strength, seed)") {
        CHECK(color_augment(img, 0.4, 7) == color_augment(img, 0.4, 7));
    }
    SUBCASE("different seeds differ") {
        CHECK(color_augment(img, 0.4, 7) != color_augment(img, 0.4, 8));
    }
    SUBCASE("gray stays gray under any saturation") {
        ImageRaster gray(10, 10);
        Xoshiro256 rng(3);
        for (std::size_t i = 0; i < gray.pixel_count(); ++i) {
            const auto v = static_cast<std::uint8_t>(rng.below(256));
            gray.pixels[i * 3] = gray.pixels[i * 3 + 1] = gray.pixels[i * 3 + 2] = v;
        }
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const ImageRaster out = color_augment(gray, 1.0, seed);
            for (std::size_t i = 0; i < out.pixel_count(); ++i) {
                CHECK(out.pixels[i * 3] == out.pixels[i * 3 + 1]);
                CHECK(out.pixels[i * 3 + 1] == out.pixels[i * 3 + 2]);
            }
        }
    }
    SUBCASE("strength out of range") {
        CHECK_THROWS_AS(color_augment(img, -0.1, 0), std::invalid_argument);
        CHECK_THROWS_AS(color_augment(img, 1.1, 0), std::invalid_argument);
    }
}

TEST_CASE("frosted glass") {
    const ImageRaster img = random_image(13, 40, 30);

    SUBCASE("radius bounds") {
        CHECK_THROWS_AS(frosted_glass(img, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(frosted_glass(img, 15, 1), std::invalid_argument);  // min(H,W)/2
        CHECK_NOTHROW(frosted_glass(img, 14, 1));
    }
    SUBCASE("constant image is a fixed point") {
        const ImageRaster flat = constant_image(20, 20, 9, 120, 77);
        for (int radius : {1, 4, 9}) CHECK(frosted_glass(flat, radius, 3) == flat);
    }
    SUBCASE("determinism") {
        CHECK(frosted_glass(img, 4, 11) == frosted_glass(img, 4, 11));
        CHECK(frosted_glass(img, 4, 11) != frosted_glass(img, 4, 12));
    }
    SUBCASE("output pixels come from the input palette positions") {
        const ImageRaster out = frosted_glass(img, 3, 5);
        CHECK(out.width == img.width);
        CHECK(out.height == img.height);
    }
}

TEST_CASE("poster") {
    SUBCASE("two levels threshold at 127.5") {
        ImageRaster img(2, 1);
        img.at(0, 0, 0) = 200;
        img.at(1, 0, 0) = 100;
        const ImageRaster out = poster(img, 2);
        CHECK(int(out.at(0, 0, 0)) == 255);
        CHECK(int(out.at(1, 0, 0)) == 0);
    }
    SUBCASE("idempotence") {
        const ImageRaster img = random_image(21, 16, 16);
        for (int levels : {2, 3, 8, 17, 32}) {
            const ImageRaster once = poster(img, levels);
            CHECK(poster(once, levels) == once);
        }
    }
    SUBCASE("32 levels fixes a 32-level image") {
        const ImageRaster img = random_image(22, 16, 16);
        const ImageRaster quantized = poster(img, 32);
        CHECK(poster(quantized, 32) == quantized);
    }
    SUBCASE("level bounds") {
        const ImageRaster img = random_image(23, 8, 8);
        CHECK_THROWS_AS(poster(img, 1), std::invalid_argument);
        CHECK_THROWS_AS(poster(img, 33), std::invalid_argument);
    }
}

TEST_CASE("mural") {
    SUBCASE("constant image maps to the nearest quantizer level") {
        const ImageRaster flat = constant_image(12, 12, 100, 100, 100);
        const ImageRaster out = mural(flat, 2, 2);
        for (std::uint8_t v : out.pixels) CHECK(int(v) == 0);  // 100 < 127.5
    }
    SUBCASE("radius 1 and 32 levels fix an already-quantized flat image") {
        // 115 = round(14*255/31) is a fixed point of the 32-level quantizer
        const ImageRaster flat = constant_image(10, 10, 115, 115, 115);
        CHECK(mural(flat, 1, 32) == flat);
    }
    SUBCASE("dims preserved") {
        const ImageRaster img = random_image(31, 17, 9);
        const ImageRaster out = mural(img, 3, 8);
        CHECK(out.width == 17);
        CHECK(out.height == 9);
    }
    SUBCASE("smooth radius must be positive") {
        CHECK_THROWS_AS(mural(random_image(1, 8, 8), 0, 8), std::invalid_argument);
    }
}

TEST_CASE("op spec grammar") {
    CHECK(parse_op_spec("lowfreq:beta=0.01").kind == AugmentKind::lowfreq_exchange);
    CHECK(parse_op_spec("color:strength=0.4").strength == doctest::Approx(0.4));
    CHECK(parse_op_spec("frosted:radius=4").radius == 4);
    CHECK(parse_op_spec("poster:levels=8").levels == 8);
    const AugmentationOp m = parse_op_spec("mural:radius=3,levels=8");
    CHECK(m.radius == 3);
    CHECK(m.levels == 8);

    for (const char* spec : {"lowfreq:beta=0.01", "color:strength=0.4", "frosted:radius=4",
                             "poster:levels=8", "mural:radius=3,levels=8"})
        CHECK(op_descriptor(parse_op_spec(spec)) == spec);

    CHECK_THROWS_AS(parse_op_spec("sepia:amount=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_op_spec("poster:levels=99"), std::invalid_argument);
    CHECK_THROWS_AS(parse_op_spec("color:wat=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_op_spec("frosted:radius=abc"), std::invalid_argument);
}

TEST_CASE("operators preserve dimensions and byte range on random inputs") {
    Xoshiro256 rng(2);
    for (int i = 0; i < 10; ++i) {
        const int w = 24 + static_cast<int>(rng.below(20));
        const int h = 24 + static_cast<int>(rng.below(20));
        const ImageRaster img = random_image(rng.next(), w, h);
        const ImageRaster ref = random_image(rng.next(), w, h);
        for (const char* spec : {"lowfreq:beta=0.2", "color:strength=0.8", "frosted:radius=5",
                                 "poster:levels=4", "mural:radius=2,levels=6"}) {
            const AugmentationOp op = parse_op_spec(spec);
            const ImageRaster out = apply_op(op, img, &ref, rng.next());
            CHECK(out.width == w);
            CHECK(out.height == h);
            CHECK(out.pixels.size() == img.pixels.size());
        }
    }
}

TEST_CASE("apply_to_dataset") {
    const fs::path root = fs::temp_directory_path() / "repshift_aug_ds";
    fs::remove_all(root);
    const auto [images, masks] = test::write_scene_dataset(root / "in", 4, 10, 48, 36);

    SUBCASE("identity op copies the dataset byte for byte") {
        const auto out =
            apply_to_dataset(parse_op_spec("color:strength=0"), images, nullptr, root / "id", 0, 2);
        CHECK(out.size() == images.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(read_image(out.path_of(i)) == read_image(images.path_of(i)));
    }

    SUBCASE("same invocation twice is byte-identical, independent of jobs") {
        const AugmentationOp op = parse_op_spec("frosted:radius=3");
        apply_to_dataset(op, images, nullptr, root / "a", 42, 1);
        apply_to_dataset(op, images, nullptr, root / "b", 42, 4);
        for (const std::string& stem : images.entries) {
            const auto a = read_image(root / "a" / (stem + ".png"));
            const auto b = read_image(root / "b" / (stem + ".png"));
            CHECK(a == b);
        }
    }

    SUBCASE("lowfreq without a reference dataset errors") {
        CHECK_THROWS_AS(apply_to_dataset(parse_op_spec("lowfreq:beta=0.1"), images, nullptr,
                                         root / "lf", 0, 1),
                        std::invalid_argument);
    }

    SUBCASE("per-op failure names the image stem") {
        // radius too large for 48x36 images
        CHECK_THROWS_WITH_AS(apply_to_dataset(parse_op_spec("frosted:radius=18"), images, nullptr,
                                              root / "bad", 0, 1),
                             doctest::Contains("entry '000'"), std::runtime_error);
    }
}
