// repshift command line: every pipeline stage behind one binary.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "repshift/augment.hpp"
#include "repshift/components.hpp"
#include "repshift/construct.hpp"
#include "repshift/dataset.hpp"
#include "repshift/filter_bank.hpp"
#include "repshift/grabcut.hpp"
#include "repshift/metrics.hpp"
#include "repshift/parallel.hpp"
#include "repshift/png_io.hpp"
#include "repshift/wasserstein.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace repshift;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    int jobs = default_jobs();
    bool quiet = false;
    bool json_output = false;
};

void log_line(const GlobalOptions& global, const std::string& message) {
    if (!global.quiet) std::cerr << message << "\n";
}

std::vector<int> parse_channel_list(const std::string& text) {
    std::vector<int> channels;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad --channels list: " + text);
        channels.push_back(std::stoi(item));
    }
    if (channels.empty()) throw std::invalid_argument("bad --channels list: " + text);
    return channels;
}

std::vector<AugmentationOp> parse_op_list(const std::string& text) {
    std::vector<AugmentationOp> ops;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ';'))
        if (!item.empty()) ops.push_back(parse_op_spec(item));
    if (ops.empty()) throw std::invalid_argument("empty op list");
    return ops;
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected --interval A,DELTA, got: " + text);
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

// ---- subcommand payloads ----------------------------------------------

int run_extract_features(const GlobalOptions& global, const std::string& input,
                         const std::string& output, std::optional<int> layers,
                         const std::optional<std::string>& channels_text) {
    FilterBankConfig config;
    if (channels_text) config.channels = parse_channel_list(*channels_text);
    if (layers && *layers != static_cast<int>(config.channels.size())) {
        if (channels_text)
            throw std::invalid_argument("--layers disagrees with --channels list length");
        if (*layers < 1) throw std::invalid_argument("--layers must be at least 1");
        // default progression 32, 64, 128, ... for other depths
        config.channels.clear();
        for (int i = 0; i < *layers; ++i) config.channels.push_back(32 << std::min(i, 4));
    }
    const FilterBank bank = build_filter_bank(global.seed, config);
    const DatasetHandle ds = load_dataset(input, DatasetKind::images);
    log_line(global, "extracting features from " + std::to_string(ds.size()) + " images");
    const ChannelMeanMatrix matrix = dataset_channel_means(bank, ds, global.jobs);
    write_feature_dump(matrix, output);

    json doc;
    doc["images"] = matrix.n_images;
    doc["channels"] = matrix.n_channels;
    doc["output"] = output;
    if (global.json_output)
        std::cout << doc.dump() << "\n";
    else
        std::cout << "wrote " << output << " (" << matrix.n_images << " images x "
                  << matrix.n_channels << " channels)\n";
    return 0;
}

int run_shift(const GlobalOptions& global, const std::string& source, const std::string& target) {
    const ChannelMeanMatrix src = read_feature_dump(source);
    const ChannelMeanMatrix tgt = read_feature_dump(target);
    const ShiftReport report = representation_shift(src, tgt, global.jobs);
    if (global.json_output)
        std::cout << report.to_json() << "\n";
    else
        std::cout << "representation shift: " << report.representation_shift << " over "
                  << report.n_channels << " channels\n";
    return 0;
}

int run_augment(const GlobalOptions& global, const std::string& op_spec, const std::string& input,
                const std::optional<std::string>& reference, const std::string& output) {
    const AugmentationOp op = parse_op_spec(op_spec);
    const DatasetHandle input_ds = load_dataset(input, DatasetKind::images);
    std::optional<DatasetHandle> ref_ds;
    if (reference) ref_ds = load_dataset(*reference, DatasetKind::images);
    if (op.needs_reference() && !ref_ds)
        throw std::invalid_argument("op '" + op_spec + "' requires --ref");

    log_line(global, "augmenting " + std::to_string(input_ds.size()) + " images with " +
                         op_descriptor(op));
    const DatasetHandle out = apply_to_dataset(op, input_ds, ref_ds ? &*ref_ds : nullptr, output,
                                               global.seed, global.jobs);
    json doc;
    doc["op"] = op_descriptor(op);
    doc["images"] = out.size();
    doc["output"] = output;
    if (global.json_output)
        std::cout << doc.dump() << "\n";
    else
        std::cout << "wrote " << out.size() << " images to " << output << "\n";
    return 0;
}

int run_construct(const GlobalOptions& global, const std::string& interval_text,
                  const std::string& source, const std::string& target, const std::string& ops_text,
                  const std::string& output, bool return_last,
                  const std::optional<std::string>& features_from) {
    const auto [center, delta] = parse_interval(interval_text);
    const std::vector<AugmentationOp> ops = parse_op_list(ops_text);
    const DatasetHandle src = load_dataset(source, DatasetKind::images);
    const DatasetHandle tgt = load_dataset(target, DatasetKind::images);
    const FilterBank bank = build_filter_bank(global.seed);

    ConstructOptions options;
    options.seed = global.seed;
    options.jobs = global.jobs;
    options.return_last = return_last;
    if (features_from) options.source_features = *features_from;

    const ConstructionReport report =
        construct_dataset({center, delta}, src, tgt, ops, bank, output, options);
    for (const auto& attempt : report.attempts)
        log_line(global, "op " + attempt.op + ": R=" + std::to_string(attempt.measured_shift) +
                             (attempt.accepted ? " (accepted)" : " (rejected)") +
                             (attempt.error.empty() ? "" : " error: " + attempt.error));

    std::cout << report.to_json() << "\n";
    return report.selected || report.returned_last ? 0 : 1;
}

int run_boxes_from_masks(const GlobalOptions& global, const std::string& masks,
                         const std::string& output, int connectivity, int min_area,
                         int num_classes) {
    const DatasetHandle ds = load_dataset(masks, DatasetKind::masks);
    const ComponentExtractionConfig config{connectivity, min_area};

    std::vector<std::vector<LabeledBox>> per_mask(ds.size());
    parallel_for(ds.size(), global.jobs, [&](std::size_t i) {
        per_mask[i] = boxes_from_mask(read_mask(ds.path_of(i), num_classes), config);
    });

    std::vector<StemBox> all;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (const LabeledBox& box : per_mask[i]) all.push_back({ds.entries[i], box});
    write_box_file(all, output);

    json doc;
    doc["masks"] = ds.size();
    doc["boxes"] = all.size();
    doc["output"] = output;
    if (global.json_output)
        std::cout << doc.dump() << "\n";
    else
        std::cout << "wrote " << all.size() << " boxes from " << ds.size() << " masks to " << output
                  << "\n";
    return 0;
}

int run_pseudo_labels(const GlobalOptions& global, const std::string& images,
                      const std::string& boxes_path, const std::string& output, int iterations,
                      double gamma, int num_classes) {
    const DatasetHandle ds = load_dataset(images, DatasetKind::images);
    std::map<std::string, std::vector<LabeledBox>> boxes_by_stem;
    for (const StemBox& sb : read_box_file(boxes_path)) {
        if (!std::binary_search(ds.entries.begin(), ds.entries.end(), sb.stem))
            throw std::runtime_error("box references unknown image stem: " + sb.stem);
        boxes_by_stem[sb.stem].push_back(sb.box);
    }

    GrabCutConfig config;
    config.max_iterations = iterations;
    config.gamma = gamma;
    config.seed = global.seed;

    fs::create_directories(output);
    parallel_for(ds.size(), global.jobs, [&](std::size_t i) {
        static const std::vector<LabeledBox> kNoBoxes;
        const auto found = boxes_by_stem.find(ds.entries[i]);
        const auto& boxes = found == boxes_by_stem.end() ? kNoBoxes : found->second;
        const ImageRaster img = read_image(ds.path_of(i));
        const SegMask mask = pseudo_label(img, boxes, config, num_classes);
        write_mask(mask, fs::path(output) / (ds.entries[i] + ".png"));
    });

    std::size_t box_count = 0;
    for (const auto& [stem, boxes] : boxes_by_stem) box_count += boxes.size();
    json doc;
    doc["images"] = ds.size();
    doc["boxes"] = box_count;
    doc["output"] = output;
    if (global.json_output)
        std::cout << doc.dump() << "\n";
    else
        std::cout << "wrote " << ds.size() << " pseudo-masks to " << output << "\n";
    return 0;
}

int run_miou(const GlobalOptions& global, const std::string& gt_dir, const std::string& pred_dir,
             int num_classes, bool undefined_as_zero) {
    const DatasetHandle gt = load_dataset(gt_dir, DatasetKind::masks);
    const DatasetHandle pred = load_dataset(pred_dir, DatasetKind::masks);
    if (gt.entries != pred.entries)
        throw std::runtime_error("ground-truth and prediction stems do not match");

    std::vector<ConfusionMatrix> partial(gt.size(), ConfusionMatrix(num_classes));
    parallel_for(gt.size(), global.jobs, [&](std::size_t i) {
        accumulate(partial[i], read_mask(gt.path_of(i), num_classes),
                   read_mask(pred.path_of(i), num_classes));
    });
    ConfusionMatrix total(num_classes);
    for (const ConfusionMatrix& cm : partial) total += cm;

    const MiouResult result = miou(total, undefined_as_zero);
    json doc;
    doc["per_class"] = json::array();
    for (int c = 0; c < num_classes; ++c)
        doc["per_class"].push_back(result.defined[c] ? json(result.per_class[c]) : json(nullptr));
    doc["miou"] = result.mean;
    doc["evaluated_classes"] = result.evaluated_classes;
    if (global.json_output)
        std::cout << doc.dump() << "\n";
    else
        std::cout << "mIoU over " << result.evaluated_classes.size() << " classes: " << result.mean
                  << "\n";
    return 0;
}

std::vector<std::pair<double, double>> read_pairs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pairs file: " + path);
    std::vector<std::pair<double, double>> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream stream(line);
        std::string first, second;
        if (!std::getline(stream, first, ',') || !std::getline(stream, second)) {
            if (line_no == 1) continue;  // header
            throw std::runtime_error("bad CSV line " + std::to_string(line_no) + ": " + line);
        }
        try {
            points.emplace_back(std::stod(first), std::stod(second));
        } catch (const std::exception&) {
            if (line_no == 1) continue;  // header
            throw std::runtime_error("bad CSV line " + std::to_string(line_no) + ": " + line);
        }
    }
    return points;
}

void write_scatter_svg(const std::string& path,
                       const std::vector<std::pair<double, double>>& points,
                       const RegressionResult& fit) {
    double min_x = points[0].first, max_x = min_x, min_y = points[0].second, max_y = min_y;
    for (const auto& [x, y] : points) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    const double span_x = max_x > min_x ? max_x - min_x : 1.0;
    const double span_y = max_y > min_y ? max_y - min_y : 1.0;
    const int width = 480, height = 320, pad = 40;
    auto px = [&](double x) { return pad + (x - min_x) / span_x * (width - 2 * pad); };
    auto py = [&](double y) { return height - pad - (y - min_y) / span_y * (height - 2 * pad); };

    std::ofstream svg(path);
    if (!svg) throw std::runtime_error("cannot create plot: " + path);
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<line x1='" << px(min_x) << "' y1='" << py(fit.slope * min_x + fit.intercept)
        << "' x2='" << px(max_x) << "' y2='" << py(fit.slope * max_x + fit.intercept)
        << "' stroke='#d62728' stroke-width='2'/>\n";
    for (const auto& [x, y] : points)
        svg << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='4' fill='#1f77b4'/>\n";
    svg << "<text x='" << pad << "' y='" << height - 8 << "' font-size='13'>r = " << fit.pearson_r
        << ", slope = " << fit.slope << "</text>\n</svg>\n";
}

int run_correlate(const GlobalOptions& global, const std::string& pairs_path,
                  const std::optional<std::string>& plot_path) {
    const auto points = read_pairs_csv(pairs_path);
    const RegressionResult fit = regress(points);
    if (plot_path) {
        write_scatter_svg(*plot_path, points, fit);
        log_line(global, "plot written to " + *plot_path);
    }
    if (global.json_output)
        std::cout << fit.to_json() << "\n";
    else
        std::cout << "pearson_r=" << fit.pearson_r << " slope=" << fit.slope
                  << " intercept=" << fit.intercept << " n=" << fit.n_points << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"representation-shift toolkit: measure domain shift, construct "
                 "shifted datasets, and derive weak-label training data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", REPSHIFT_CLI_VERSION);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "seed for every stochastic stage")->capture_default_str();
    app.add_option("--jobs", global.jobs, "worker count")->capture_default_str();
    app.add_flag("--quiet", global.quiet, "suppress progress output on stderr");
    app.add_flag("--json", global.json_output, "machine-readable JSON on stdout");

    // extract-features
    auto* extract_cmd = app.add_subcommand("extract-features",
                                           "channel-mean activations of a dataset -> .wfd dump");
    std::string ef_input, ef_output;
    std::optional<int> ef_layers;
    std::optional<std::string> ef_channels;
    extract_cmd->add_option("--input", ef_input, "image directory")->required();
    extract_cmd->add_option("--output", ef_output, "output .wfd file")->required();
    extract_cmd->add_option("--layers", ef_layers, "filter bank depth (default 2)");
    extract_cmd->add_option("--channels", ef_channels, "per-layer channel counts, e.g. 32,64");

    // shift
    auto* shift_cmd = app.add_subcommand("shift", "representation shift between two feature dumps");
    std::string sh_source, sh_target;
    shift_cmd->add_option("--source", sh_source, "source .wfd")->required();
    shift_cmd->add_option("--target", sh_target, "target .wfd")->required();

    // augment
    auto* augment_cmd = app.add_subcommand("augment", "apply one augmentation op to a dataset");
    std::string au_op, au_input, au_output;
    std::optional<std::string> au_ref;
    augment_cmd->add_option("--op", au_op, "op spec, e.g. frosted:radius=4")->required();
    augment_cmd->add_option("--input", au_input, "image directory")->required();
    augment_cmd->add_option("--ref", au_ref, "reference directory (lowfreq source)");
    augment_cmd->add_option("--output", au_output, "output directory")->required();

    // construct
    auto* construct_cmd =
        app.add_subcommand("construct", "search the op list for a dataset inside a shift interval");
    std::string co_interval, co_source, co_target, co_ops, co_output;
    bool co_return_last = false;
    std::optional<std::string> co_features_from;
    construct_cmd->add_option("--interval", co_interval, "A,DELTA target interval")->required();
    construct_cmd->add_option("--source", co_source, "source image directory")->required();
    construct_cmd->add_option("--target", co_target, "target image directory")->required();
    construct_cmd->add_option("--ops", co_ops, "semicolon-separated op specs")->required();
    construct_cmd->add_option("--output", co_output, "output directory")->required();
    construct_cmd->add_flag("--return-last", co_return_last,
                            "keep the last candidate when nothing lands in the interval");
    construct_cmd->add_option("--features-from", co_features_from,
                              "precomputed source feature dump (.wfd)");

    // boxes-from-masks
    auto* boxes_cmd =
        app.add_subcommand("boxes-from-masks", "connected-component boxes from semantic masks");
    std::string bm_masks, bm_output;
    int bm_connectivity = 8, bm_min_area = 64, bm_classes = 19;
    boxes_cmd->add_option("--masks", bm_masks, "mask directory")->required();
    boxes_cmd->add_option("--output", bm_output, "output box file")->required();
    boxes_cmd->add_option("--connectivity", bm_connectivity, "4 or 8")->capture_default_str();
    boxes_cmd->add_option("--min-area", bm_min_area, "minimum component area")->capture_default_str();
    boxes_cmd->add_option("--classes", bm_classes, "class count")->capture_default_str();

    // pseudo-labels
    auto* pseudo_cmd =
        app.add_subcommand("pseudo-labels", "box-supervised pseudo-masks via iterative graph cuts");
    std::string pl_images, pl_boxes, pl_output;
    int pl_iters = 5, pl_classes = 19;
    double pl_gamma = 50.0;
    pseudo_cmd->add_option("--images", pl_images, "image directory")->required();
    pseudo_cmd->add_option("--boxes", pl_boxes, "box file")->required();
    pseudo_cmd->add_option("--output", pl_output, "output mask directory")->required();
    pseudo_cmd->add_option("--iters", pl_iters, "graph-cut iterations")->capture_default_str();
    pseudo_cmd->add_option("--gamma", pl_gamma, "pairwise smoothness weight")->capture_default_str();
    pseudo_cmd->add_option("--classes", pl_classes, "class count")->capture_default_str();

    // miou
    auto* miou_cmd = app.add_subcommand("miou", "mean IoU of predictions against ground truth");
    std::string mi_gt, mi_pred;
    int mi_classes = 19;
    bool mi_zero = false;
    miou_cmd->add_option("--gt", mi_gt, "ground-truth mask directory")->required();
    miou_cmd->add_option("--pred", mi_pred, "prediction mask directory")->required();
    miou_cmd->add_option("--classes", mi_classes, "class count")->capture_default_str();
    miou_cmd->add_flag("--undefined-as-zero", mi_zero,
                       "count classes absent from GT and prediction as IoU 0");

    // correlate
    auto* correlate_cmd =
        app.add_subcommand("correlate", "Pearson/OLS of (shift, miou) pairs from a CSV");
    std::string cr_pairs;
    std::optional<std::string> cr_plot;
    correlate_cmd->add_option("--pairs", cr_pairs, "two-column CSV: shift,miou")->required();
    correlate_cmd->add_option("--plot", cr_plot, "write an SVG scatter + fit line");

    // let --seed/--jobs/--json/--quiet appear after the subcommand too
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*extract_cmd)
            return run_extract_features(global, ef_input, ef_output, ef_layers, ef_channels);
        if (*shift_cmd) return run_shift(global, sh_source, sh_target);
        if (*augment_cmd) return run_augment(global, au_op, au_input, au_ref, au_output);
        if (*construct_cmd)
            return run_construct(global, co_interval, co_source, co_target, co_ops, co_output,
                                 co_return_last, co_features_from);
        if (*boxes_cmd)
            return run_boxes_from_masks(global, bm_masks, bm_output, bm_connectivity, bm_min_area,
                                        bm_classes);
        if (*pseudo_cmd)
            return run_pseudo_labels(global, pl_images, pl_boxes, pl_output, pl_iters, pl_gamma,
                                     pl_classes);
        if (*miou_cmd) return run_miou(global, mi_gt, mi_pred, mi_classes, mi_zero);
        if (*correlate_cmd) return run_correlate(global, cr_pairs, cr_plot);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
