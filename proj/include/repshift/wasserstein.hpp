#pragma once

#include <span>
#include <string>
#include <vector>

#include "repshift/feature_dump.hpp"

namespace repshift {

/// Empirical 1-D distribution: equal point masses at the sample values.
/// Samples are sorted ascending on construction.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    const std::vector<double>& sorted_samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

private:
    std::vector<double> samples_;
};

/// Exact Wasserstein-1 between two empirical measures: the integral of the
/// absolute difference of quantile functions, evaluated in closed form by
/// sweeping the merged breakpoints. Unequal sample counts are handled
/// exactly; ties and repeats need no special casing.
double wasserstein1(const EmpiricalDistribution& p, const EmpiricalDistribution& q);

struct ShiftReport {
    std::uint32_t n_channels = 0;
    std::vector<double> per_channel_w;
    double representation_shift = 0.0;
    std::string source_tag;
    std::string target_tag;

    std::string to_json() const;
};

/// Mean over channels of the per-channel Wasserstein-1 distance between the
/// column distributions of the two matrices.
ShiftReport representation_shift(const ChannelMeanMatrix& src, const ChannelMeanMatrix& tgt,
                                 int jobs = 1);

}  // namespace repshift
