#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repshift/image.hpp"

namespace repshift {

/// counts[gt][pred] over non-ignored pixels; 64-bit so dataset-scale
/// accumulation stays exact. Merging matrices is plain addition.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<std::uint64_t> counts;  // num_classes * num_classes

    explicit ConfusionMatrix(int k) : num_classes(k), counts(static_cast<std::size_t>(k) * k, 0) {}

    std::uint64_t at(int gt, int pred) const {
        return counts[static_cast<std::size_t>(gt) * num_classes + pred];
    }
    std::uint64_t& at(int gt, int pred) {
        return counts[static_cast<std::size_t>(gt) * num_classes + pred];
    }

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

/// Adds one mask pair; ground-truth 255 pixels are skipped, 255 or an
/// out-of-range id in the prediction is an error.
void accumulate(ConfusionMatrix& cm, const SegMask& gt, const SegMask& pred);

struct MiouResult {
    std::vector<double> per_class;     // valid where defined[k]
    std::vector<bool> defined;         // false when the class never occurs
    std::vector<int> evaluated_classes;
    double mean = 0.0;
};

/// IoU_k = diag / (row + col - diag). Classes with zero denominator are
/// excluded from the mean by default; undefined_as_zero counts them as 0.
MiouResult miou(const ConfusionMatrix& cm, bool undefined_as_zero = false);

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double pearson_r = 0.0;
    int n_points = 0;

    std::string to_json() const;
};

/// Ordinary least squares y = slope*x + intercept plus the product-moment
/// correlation, both two-pass mean-centered in 64-bit arithmetic.
RegressionResult regress(std::span<const std::pair<double, double>> points);

}  // namespace repshift
