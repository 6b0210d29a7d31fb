#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace repshift {

/// Axis-aligned class-tagged box, all coordinates inclusive.
struct LabeledBox {
    int class_id = 0;
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    std::int64_t area() const {
        return static_cast<std::int64_t>(x_max - x_min + 1) * (y_max - y_min + 1);
    }
    bool operator==(const LabeledBox&) const = default;
};

void validate_box(const LabeledBox& box, int image_width, int image_height, int num_classes);

struct StemBox {
    std::string stem;
    LabeledBox box;
    bool operator==(const StemBox&) const = default;
};

// Box file format: one box per line, LF line endings,
//   <image_stem> <class_id> <x_min> <y_min> <x_max> <y_max>
// space-separated canonical decimal integers. Parsing is strict so that
// every parsed line re-serializes byte-identically.
std::string box_line(const StemBox& sb);
StemBox parse_box_line(const std::string& line);

std::vector<StemBox> read_box_file(const std::filesystem::path& path);
void write_box_file(std::span<const StemBox> boxes, const std::filesystem::path& path);

}  // namespace repshift
