#include "repshift/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace repshift {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.num_classes != num_classes)
        throw std::invalid_argument("cannot merge confusion matrices of different class counts");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

void accumulate(ConfusionMatrix& cm, const SegMask& gt, const SegMask& pred) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw std::invalid_argument("ground truth and prediction dimensions differ");
    const int k = cm.num_classes;
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        const int g = gt.labels[i];
        if (g == kIgnoreLabel) continue;
        if (g >= k)
            throw std::invalid_argument("ground-truth label " + std::to_string(g) + " out of range");
        const int p = pred.labels[i];
        if (p >= k)
            throw std::invalid_argument("out-of-range prediction " + std::to_string(p) +
                                        " at pixel index " + std::to_string(i));
        ++cm.at(g, p);
    }
}

MiouResult miou(const ConfusionMatrix& cm, bool undefined_as_zero) {
    const int k = cm.num_classes;
    MiouResult result;
    result.per_class.assign(k, 0.0);
    result.defined.assign(k, false);

    double sum = 0.0;
    int counted = 0;
    for (int c = 0; c < k; ++c) {
        std::uint64_t row = 0, col = 0;
        for (int j = 0; j < k; ++j) {
            row += cm.at(c, j);
            col += cm.at(j, c);
        }
        const std::uint64_t diag = cm.at(c, c);
        const std::uint64_t denom = row + col - diag;
        if (denom == 0) {
            if (undefined_as_zero) {
                result.defined[c] = true;
                result.evaluated_classes.push_back(c);
                ++counted;
            }
            continue;
        }
        result.per_class[c] = static_cast<double>(diag) / static_cast<double>(denom);
        result.defined[c] = true;
        result.evaluated_classes.push_back(c);
        sum += result.per_class[c];
        ++counted;
    }
    if (counted == 0) throw std::runtime_error("no evaluated classes");
    result.mean = sum / counted;
    return result;
}

std::string RegressionResult::to_json() const {
    nlohmann::json doc;
    doc["slope"] = slope;
    doc["intercept"] = intercept;
    doc["pearson_r"] = pearson_r;
    doc["n_points"] = n_points;
    return doc.dump();
}

RegressionResult regress(std::span<const std::pair<double, double>> points) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("regression needs at least 2 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = x - mean_x, dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("shift values are constant");
    if (syy == 0.0) throw std::invalid_argument("dependent values are constant");

    RegressionResult result;
    result.n_points = static_cast<int>(n);
    result.slope = sxy / sxx;
    result.intercept = mean_y - result.slope * mean_x;
    result.pearson_r = sxy / std::sqrt(sxx * syy);
    return result;
}

}  // namespace repshift
