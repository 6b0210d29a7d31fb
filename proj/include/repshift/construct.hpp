#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "repshift/augment.hpp"
#include "repshift/dataset.hpp"
#include "repshift/filter_bank.hpp"

namespace repshift {

/// Open interval (center - half_width, center + half_width).
struct ShiftInterval {
    double center = 0.0;
    double half_width = 0.0;

    bool contains(double r) const { return r > center - half_width && r < center + half_width; }
};

struct ConstructionAttempt {
    std::string op;
    double measured_shift = 0.0;
    bool accepted = false;
    std::string error;  // non-empty when the op itself failed; counts as a rejection
};

struct ConstructionReport {
    std::vector<ConstructionAttempt> attempts;
    std::optional<std::string> selected;
    std::optional<std::string> output_root;
    bool returned_last = false;

    std::string to_json() const;
};

struct ConstructOptions {
    std::uint64_t seed = 0;
    int jobs = 1;
    bool return_last = false;
    // when set, source-side features come from this dump instead of the bank
    std::optional<std::filesystem::path> source_features;
};

/// Scans ops in order, applying each to tgt and measuring the shift of the
/// candidate against src. The first op whose shift lands strictly inside the
/// interval is accepted and its output persists under out_root; rejected
/// candidates are deleted. With no hit the report carries selected = none,
/// unless return_last is set, in which case the last candidate is kept.
ConstructionReport construct_dataset(const ShiftInterval& interval, const DatasetHandle& src,
                                     const DatasetHandle& tgt,
                                     const std::vector<AugmentationOp>& ops, const FilterBank& bank,
                                     const std::filesystem::path& out_root,
                                     const ConstructOptions& options = {});

}  // namespace repshift
