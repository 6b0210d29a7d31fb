#include "repshift/construct.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "repshift/wasserstein.hpp"

namespace repshift {

std::string ConstructionReport::to_json() const {
    nlohmann::json doc;
    doc["attempts"] = nlohmann::json::array();
    for (const auto& a : attempts) {
        nlohmann::json item;
        item["op"] = a.op;
        item["r"] = a.measured_shift;
        item["accepted"] = a.accepted;
        if (!a.error.empty()) item["error"] = a.error;
        doc["attempts"].push_back(item);
    }
    doc["selected"] = selected ? nlohmann::json(*selected) : nlohmann::json(nullptr);
    doc["output_root"] = output_root ? nlohmann::json(*output_root) : nlohmann::json(nullptr);
    doc["returned_last"] = returned_last;
    return doc.dump();
}

namespace {

void remove_candidate_files(const DatasetHandle& candidate) {
    for (std::size_t i = 0; i < candidate.size(); ++i)
        std::filesystem::remove(candidate.path_of(i));
}

}  // namespace

ConstructionReport construct_dataset(const ShiftInterval& interval, const DatasetHandle& src,
                                     const DatasetHandle& tgt,
                                     const std::vector<AugmentationOp>& ops, const FilterBank& bank,
                                     const std::filesystem::path& out_root,
                                     const ConstructOptions& options) {
    if (ops.empty()) throw std::invalid_argument("op list must be non-empty");
    if (interval.half_width <= 0.0) throw std::invalid_argument("interval half-width must be > 0");

    const ChannelMeanMatrix source_features =
        options.source_features ? read_feature_dump(*options.source_features)
                                : dataset_channel_means(bank, src, options.jobs);
    if (source_features.n_channels != static_cast<std::uint32_t>(bank.out_channels()))
        throw std::invalid_argument("source feature dump has " +
                                    std::to_string(source_features.n_channels) +
                                    " channels, the filter bank produces " +
                                    std::to_string(bank.out_channels()));

    ConstructionReport report;
    bool have_candidate = false;
    DatasetHandle candidate;

    for (const AugmentationOp& op : ops) {
        ConstructionAttempt attempt;
        attempt.op = op_descriptor(op);
        try {
            if (have_candidate) remove_candidate_files(candidate);
            have_candidate = false;
            candidate = apply_to_dataset(op, tgt, op.needs_reference() ? &src : nullptr, out_root,
                                         options.seed, options.jobs);
            have_candidate = true;
            const ChannelMeanMatrix candidate_features =
                dataset_channel_means(bank, candidate, options.jobs);
            attempt.measured_shift =
                representation_shift(candidate_features, source_features, options.jobs)
                    .representation_shift;
            attempt.accepted = interval.contains(attempt.measured_shift);
        } catch (const std::exception& e) {
            attempt.error = e.what();  // logged and treated as a rejection
            if (!have_candidate) {
                // a failed apply may have written part of the tree
                for (const std::string& stem : tgt.entries)
                    std::filesystem::remove(out_root / (stem + ".png"));
            }
        }
        report.attempts.push_back(attempt);
        if (attempt.accepted) {
            report.selected = attempt.op;
            report.output_root = out_root.string();
            return report;
        }
    }

    // loop exhausted without a hit
    if (options.return_last && have_candidate) {
        report.returned_last = true;
        report.output_root = out_root.string();
    } else if (have_candidate) {
        remove_candidate_files(candidate);
    }
    return report;
}

}  // namespace repshift
