#include "repshift/grabcut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "repshift/gmm.hpp"
#include "repshift/maxflow.hpp"
#include "repshift/rng.hpp"

namespace repshift {

namespace {

constexpr std::uint8_t kBackground = 0;
constexpr std::uint8_t kForeground = 1;

Eigen::Vector3d pixel_color(const ImageRaster& img, std::size_t i) {
    return {img.pixels[i * 3] / 255.0, img.pixels[i * 3 + 1] / 255.0, img.pixels[i * 3 + 2] / 255.0};
}

// 8-neighborhood, forward half (each undirected pair visited once)
constexpr int kNeighborDx[4] = {1, -1, 0, 1};
constexpr int kNeighborDy[4] = {0, 1, 1, 1};
const double kNeighborDist[4] = {1.0, std::numbers::sqrt2, 1.0, std::numbers::sqrt2};

double contrast_beta(const ImageRaster& img) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int d = 0; d < 4; ++d) {
                const int nx = x + kNeighborDx[d], ny = y + kNeighborDy[d];
                if (nx < 0 || nx >= img.width || ny >= img.height) continue;
                const Eigen::Vector3d diff =
                    pixel_color(img, static_cast<std::size_t>(y) * img.width + x) -
                    pixel_color(img, static_cast<std::size_t>(ny) * img.width + nx);
                sum += diff.squaredNorm();
                ++pairs;
            }
    const double mean = pairs ? sum / static_cast<double>(pairs) : 0.0;
    return mean > 0.0 ? 1.0 / (2.0 * mean) : 0.0;
}

std::vector<Eigen::Vector3d> gather_colors(const ImageRaster& img,
                                           const std::vector<std::uint8_t>& labels,
                                           std::uint8_t wanted) {
    std::vector<Eigen::Vector3d> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == wanted) out.push_back(pixel_color(img, i));
    return out;
}

}  // namespace

GrabCutResult grabcut_box(const ImageRaster& img, const LabeledBox& box, const GrabCutConfig& cfg) {
    img.validate();
    if (box.x_min < 0 || box.y_min < 0 || box.x_min > box.x_max || box.y_min > box.y_max ||
        box.x_max >= img.width || box.y_max >= img.height)
        throw std::invalid_argument("box out of image bounds");
    if (cfg.gmm_components < 1 || cfg.max_iterations < 1 || cfg.gamma <= 0.0)
        throw std::invalid_argument("invalid grabcut configuration");

    const int w = img.width, h = img.height;
    GrabCutResult result;
    result.width = w;
    result.height = h;
    result.foreground.assign(static_cast<std::size_t>(w) * h, 0);

    auto fill_box_foreground = [&] {
        for (int y = box.y_min; y <= box.y_max; ++y)
            for (int x = box.x_min; x <= box.x_max; ++x)
                result.foreground[static_cast<std::size_t>(y) * w + x] = 1;
    };

    // no definite background to constrain the cut
    const bool box_covers_image =
        box.x_min == 0 && box.y_min == 0 && box.x_max == w - 1 && box.y_max == h - 1;
    if (box_covers_image) {
        fill_box_foreground();
        return result;
    }
    // single-color image: both models collapse to the same floored Gaussian
    bool uniform = true;
    for (std::size_t i = 3; i < img.pixels.size() && uniform; ++i)
        uniform = img.pixels[i] == img.pixels[i % 3];
    if (uniform) {
        fill_box_foreground();
        return result;
    }

    const double beta = contrast_beta(img);
    const int bw = box.x_max - box.x_min + 1;
    const int bh = box.y_max - box.y_min + 1;
    auto in_box = [&](int x, int y) {
        return x >= box.x_min && x <= box.x_max && y >= box.y_min && y <= box.y_max;
    };
    auto node_of = [&](int x, int y) { return (y - box.y_min) * bw + (x - box.x_min); };

    std::vector<std::uint8_t> labels(static_cast<std::size_t>(w) * h, kBackground);
    for (int y = box.y_min; y <= box.y_max; ++y)
        for (int x = box.x_min; x <= box.x_max; ++x)
            labels[static_cast<std::size_t>(y) * w + x] = kForeground;

    Gmm fg_model, bg_model;
    double previous_energy = std::numeric_limits<double>::infinity();

    for (int iteration = 0; iteration < cfg.max_iterations; ++iteration) {
        const std::vector<Eigen::Vector3d> fg_colors = gather_colors(img, labels, kForeground);
        const std::vector<Eigen::Vector3d> bg_colors = gather_colors(img, labels, kBackground);
        if (fg_colors.empty()) break;  // collapsed to empty foreground

        if (iteration == 0) {
            fg_model = Gmm::fit_kmeans(fg_colors, cfg.gmm_components, mix_seed(cfg.seed, 1));
            bg_model = Gmm::fit_kmeans(bg_colors, cfg.gmm_components, mix_seed(cfg.seed, 2));
        } else {
            fg_model = fg_model.em_refit(fg_colors);
            bg_model = bg_model.em_refit(bg_colors);
        }

        MaxFlowGraph graph(bw * bh);
        double pinned_unaries = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                const Eigen::Vector3d z = pixel_color(img, i);
                if (!in_box(x, y)) {
                    pinned_unaries += -bg_model.log_likelihood(z);
                    continue;
                }
                const int node = node_of(x, y);
                const double unary_fg = -fg_model.log_likelihood(z);
                const double unary_bg = -bg_model.log_likelihood(z);
                double to_sink = unary_fg;  // paid when the pixel stays foreground

                for (int d = 0; d < 4; ++d) {
                    const int nx = x + kNeighborDx[d], ny = y + kNeighborDy[d];
                    if (nx < 0 || nx >= w || ny >= h) continue;
                    const Eigen::Vector3d diff =
                        z - pixel_color(img, static_cast<std::size_t>(ny) * w + nx);
                    const double weight =
                        cfg.gamma * std::exp(-beta * diff.squaredNorm()) / kNeighborDist[d];
                    if (in_box(nx, ny))
                        graph.add_edge(node, node_of(nx, ny), weight, weight);
                    else
                        to_sink += weight;  // cut against the pinned background
                }
                // backward half against pinned pixels (their forward pass skipped us)
                for (int d = 0; d < 4; ++d) {
                    const int nx = x - kNeighborDx[d], ny = y - kNeighborDy[d];
                    if (nx < 0 || nx >= w || ny < 0) continue;
                    if (in_box(nx, ny)) continue;
                    const Eigen::Vector3d diff =
                        z - pixel_color(img, static_cast<std::size_t>(ny) * w + nx);
                    to_sink += cfg.gamma * std::exp(-beta * diff.squaredNorm()) / kNeighborDist[d];
                }
                graph.add_terminal_weights(node, unary_bg, to_sink);
            }

        const double energy = graph.max_flow() + pinned_unaries;
        result.iteration_energies.push_back(energy);

        for (int y = box.y_min; y <= box.y_max; ++y)
            for (int x = box.x_min; x <= box.x_max; ++x)
                labels[static_cast<std::size_t>(y) * w + x] =
                    graph.in_source_side(node_of(x, y)) ? kForeground : kBackground;

        if (iteration > 0 &&
            previous_energy - energy <= cfg.convergence_eps * std::abs(previous_energy))
            break;
        previous_energy = energy;
    }

    for (int y = box.y_min; y <= box.y_max; ++y)
        for (int x = box.x_min; x <= box.x_max; ++x)
            result.foreground[static_cast<std::size_t>(y) * w + x] =
                labels[static_cast<std::size_t>(y) * w + x] == kForeground ? 1 : 0;
    return result;
}

SegMask pseudo_label(const ImageRaster& img, std::span<const LabeledBox> boxes,
                     const GrabCutConfig& cfg, int num_classes) {
    img.validate();
    for (const LabeledBox& box : boxes) validate_box(box, img.width, img.height, num_classes);

    SegMask mask(img.width, img.height, kIgnoreLabel);
    if (boxes.empty()) return mask;

    // paint larger boxes first; the smaller box is assumed in front and
    // overwrites; on equal area the earlier box paints last and wins
    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (boxes[a].area() != boxes[b].area()) return boxes[a].area() > boxes[b].area();
        return a > b;
    });

    for (std::size_t idx : order) {
        const LabeledBox& box = boxes[idx];
        GrabCutConfig box_cfg = cfg;
        box_cfg.seed = mix_seed(cfg.seed, idx);
        const GrabCutResult cut = grabcut_box(img, box, box_cfg);
        for (int y = box.y_min; y <= box.y_max; ++y)
            for (int x = box.x_min; x <= box.x_max; ++x)
                if (cut.is_foreground(x, y))
                    mask.at(x, y) = static_cast<std::uint8_t>(box.class_id);
    }
    return mask;
}

}  // namespace repshift
