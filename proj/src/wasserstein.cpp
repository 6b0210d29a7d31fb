#include "repshift/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "repshift/parallel.hpp"

namespace repshift {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("empirical distribution needs at least 1 sample");
    for (double v : samples_)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample in distribution");
    std::sort(samples_.begin(), samples_.end());
}

double wasserstein1(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
    const auto& a = p.sorted_samples();
    const auto& b = q.sorted_samples();
    const std::uint64_t n = a.size(), m = b.size();

    // Quantile functions are piecewise constant with breakpoints at i/n and
    // j/m. Sweep on the common 1/(n*m) grid so breakpoint comparisons are
    // exact integer arithmetic.
    const std::uint64_t total = n * m;
    std::uint64_t pos = 0, i = 0, j = 0;
    double sum = 0.0;
    while (pos < total) {
        const std::uint64_t next_a = (i + 1) * m;
        const std::uint64_t next_b = (j + 1) * n;
        const std::uint64_t next = std::min(next_a, next_b);
        sum += static_cast<double>(next - pos) * std::abs(a[i] - b[j]);
        if (next == next_a) ++i;
        if (next == next_b) ++j;
        pos = next;
    }
    return sum / static_cast<double>(total);
}

std::string ShiftReport::to_json() const {
    nlohmann::json doc;
    doc["channels"] = n_channels;
    doc["per_channel_w"] = per_channel_w;
    doc["representation_shift"] = representation_shift;
    doc["source"] = source_tag;
    doc["target"] = target_tag;
    return doc.dump();
}

ShiftReport representation_shift(const ChannelMeanMatrix& src, const ChannelMeanMatrix& tgt,
                                 int jobs) {
    src.validate();
    tgt.validate();
    if (src.n_channels != tgt.n_channels)
        throw std::invalid_argument("channel count mismatch: source has " +
                                    std::to_string(src.n_channels) + ", target has " +
                                    std::to_string(tgt.n_channels));

    ShiftReport report;
    report.n_channels = src.n_channels;
    report.per_channel_w.resize(src.n_channels);
    report.source_tag = src.source_tag;
    report.target_tag = tgt.source_tag;

    parallel_for(src.n_channels, jobs, [&](std::size_t c) {
        std::vector<double> col_src(src.n_images), col_tgt(tgt.n_images);
        for (std::uint32_t i = 0; i < src.n_images; ++i) col_src[i] = src.at(i, c);
        for (std::uint32_t i = 0; i < tgt.n_images; ++i) col_tgt[i] = tgt.at(i, c);
        report.per_channel_w[c] = wasserstein1(EmpiricalDistribution(std::move(col_src)),
                                               EmpiricalDistribution(std::move(col_tgt)));
    });

    // Neumaier-compensated sum in fixed channel order; the reduction result
    // does not depend on how the distances were scheduled above.
    double sum = 0.0, compensation = 0.0;
    for (double w : report.per_channel_w) {
        const double t = sum + w;
        if (std::abs(sum) >= std::abs(w))
            compensation += (sum - t) + w;
        else
            compensation += (w - t) + sum;
        sum = t;
    }
    report.representation_shift = (sum + compensation) / static_cast<double>(report.n_channels);
    return report;
}

}  // namespace repshift
