#include "repshift/components.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace repshift {

std::vector<LabeledBox> boxes_from_mask(const SegMask& mask, const ComponentExtractionConfig& cfg) {
    if (cfg.connectivity != 4 && cfg.connectivity != 8)
        throw std::invalid_argument("connectivity must be 4 or 8");
    if (cfg.min_area < 1) throw std::invalid_argument("min_area must be at least 1");

    const int w = mask.width, h = mask.height;
    static constexpr int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static constexpr int dx4[] = {0, -1, 1, 0};
    static constexpr int dy4[] = {-1, 0, 0, 1};
    const int* dx = cfg.connectivity == 8 ? dx8 : dx4;
    const int* dy = cfg.connectivity == 8 ? dy8 : dy4;
    const int n_dirs = cfg.connectivity;

    std::vector<bool> visited(static_cast<std::size_t>(w) * h, false);
    std::vector<std::size_t> stack;
    std::vector<LabeledBox> boxes;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t start = static_cast<std::size_t>(y) * w + x;
            if (visited[start]) continue;
            const std::uint8_t cls = mask.labels[start];
            if (cls == kIgnoreLabel) continue;

            visited[start] = true;
            stack.assign(1, start);
            LabeledBox box{static_cast<int>(cls), x, y, x, y};
            std::int64_t area = 0;
            while (!stack.empty()) {
                const std::size_t idx = stack.back();
                stack.pop_back();
                ++area;
                const int cx = static_cast<int>(idx % w), cy = static_cast<int>(idx / w);
                box.x_min = std::min(box.x_min, cx);
                box.x_max = std::max(box.x_max, cx);
                box.y_min = std::min(box.y_min, cy);
                box.y_max = std::max(box.y_max, cy);
                for (int d = 0; d < n_dirs; ++d) {
                    const int nx = cx + dx[d], ny = cy + dy[d];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                    if (visited[nidx] || mask.labels[nidx] != cls) continue;
                    visited[nidx] = true;
                    stack.push_back(nidx);
                }
            }
            if (area >= cfg.min_area) boxes.push_back(box);
        }
    }

    std::sort(boxes.begin(), boxes.end(), [](const LabeledBox& a, const LabeledBox& b) {
        return std::tie(a.class_id, a.y_min, a.x_min, a.x_max, a.y_max) <
               std::tie(b.class_id, b.y_min, b.x_min, b.x_max, b.y_max);
    });
    return boxes;
}

}  // namespace repshift
