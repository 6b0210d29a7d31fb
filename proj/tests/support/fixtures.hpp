#pragma once

// Deterministic synthetic scenes used as the natural-photo stand-in fixture
// set: smooth sky, textured ground, and a few colored structures with an
// aligned class mask (0 sky, 1 ground, 2 building, 3 vegetation, 4 vehicle).

#include <cstdint>
#include <filesystem>

#include "repshift/dataset.hpp"
#include "repshift/image.hpp"

namespace repshift::test {

constexpr int kFixtureClasses = 5;

struct Scene {
    ImageRaster image;
    SegMask mask;
};

Scene synth_scene(std::uint64_t seed, int width = 96, int height = 64);

/// Writes `count` scenes (stems 000, 001, ...) under root/images and
/// root/masks; returns handles to both.
struct SceneDataset {
    DatasetHandle images;
    DatasetHandle masks;
};
SceneDataset write_scene_dataset(const std::filesystem::path& root, int count,
                                 std::uint64_t seed_base = 1, int width = 96, int height = 64);

}  // namespace repshift::test
