#include "repshift/boxes.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace repshift {

void validate_box(const LabeledBox& box, int image_width, int image_height, int num_classes) {
    if (box.class_id < 0 || box.class_id >= num_classes)
        throw std::invalid_argument("box class id " + std::to_string(box.class_id) +
                                    " out of range 0.." + std::to_string(num_classes - 1));
    if (box.x_min < 0 || box.y_min < 0 || box.x_min > box.x_max || box.y_min > box.y_max ||
        box.x_max >= image_width || box.y_max >= image_height)
        throw std::invalid_argument("box coordinates out of bounds for " +
                                    std::to_string(image_width) + "x" + std::to_string(image_height) +
                                    " image");
}

std::string box_line(const StemBox& sb) {
    return sb.stem + ' ' + std::to_string(sb.box.class_id) + ' ' + std::to_string(sb.box.x_min) +
           ' ' + std::to_string(sb.box.y_min) + ' ' + std::to_string(sb.box.x_max) + ' ' +
           std::to_string(sb.box.y_max);
}

namespace {

// canonical decimal: optional single '-', no leading zeros except "0" itself
int parse_canonical_int(const std::string& token, const std::string& line) {
    if (token.empty()) throw std::runtime_error("malformed box line: " + line);
    std::size_t digits_at = token[0] == '-' ? 1 : 0;
    if (token.size() == digits_at) throw std::runtime_error("malformed box line: " + line);
    if (token[digits_at] == '0' && token.size() > digits_at + 1)
        throw std::runtime_error("non-canonical integer in box line: " + line);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw std::runtime_error("malformed box line: " + line);
    return value;
}

}  // namespace

StemBox parse_box_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = line.find(' ', pos);
        if (next == std::string::npos) {
            tokens.push_back(line.substr(pos));
            break;
        }
        tokens.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    if (tokens.size() != 6)
        throw std::runtime_error("box line must have 6 space-separated fields: " + line);
    if (tokens[0].empty()) throw std::runtime_error("empty image stem in box line: " + line);

    StemBox sb;
    sb.stem = tokens[0];
    sb.box.class_id = parse_canonical_int(tokens[1], line);
    sb.box.x_min = parse_canonical_int(tokens[2], line);
    sb.box.y_min = parse_canonical_int(tokens[3], line);
    sb.box.x_max = parse_canonical_int(tokens[4], line);
    sb.box.y_max = parse_canonical_int(tokens[5], line);
    return sb;
}

std::vector<StemBox> read_box_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open box file: " + path.string());

    std::vector<StemBox> boxes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        boxes.push_back(parse_box_line(line));
    }
    return boxes;
}

void write_box_file(std::span<const StemBox> boxes, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create box file: " + path.string());
    for (const StemBox& sb : boxes) out << box_line(sb) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace repshift
