#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "repshift/augment.hpp"
#include "repshift/components.hpp"
#include "repshift/feature_dump.hpp"
#include "repshift/filter_bank.hpp"
#include "repshift/grabcut.hpp"
#include "repshift/metrics.hpp"
#include "repshift/png_io.hpp"
#include "repshift/wasserstein.hpp"

namespace py = pybind11;
using namespace repshift;

namespace {

ImageRaster image_from_array(const py::array_t<std::uint8_t, py::array::c_style>& array) {
    if (array.ndim() != 3 || array.shape(2) != 3)
        throw std::invalid_argument("expected a (H, W, 3) uint8 array");
    ImageRaster img(static_cast<int>(array.shape(1)), static_cast<int>(array.shape(0)));
    std::memcpy(img.pixels.data(), array.data(), img.pixels.size());
    return img;
}

py::array_t<std::uint8_t> array_from_image(const ImageRaster& img) {
    py::array_t<std::uint8_t> array({img.height, img.width, 3});
    std::memcpy(array.mutable_data(), img.pixels.data(), img.pixels.size());
    return array;
}

SegMask mask_from_array(const py::array_t<std::uint8_t, py::array::c_style>& array) {
    if (array.ndim() != 2) throw std::invalid_argument("expected a (H, W) uint8 array");
    SegMask mask(static_cast<int>(array.shape(1)), static_cast<int>(array.shape(0)));
    std::memcpy(mask.labels.data(), array.data(), mask.labels.size());
    return mask;
}

py::array_t<std::uint8_t> array_from_mask(const SegMask& mask) {
    py::array_t<std::uint8_t> array({mask.height, mask.width});
    std::memcpy(array.mutable_data(), mask.labels.data(), mask.labels.size());
    return array;
}

ChannelMeanMatrix matrix_from_array(const py::array_t<float, py::array::c_style>& array,
                                    const std::string& tag) {
    if (array.ndim() != 2) throw std::invalid_argument("expected a (n_images, n_channels) array");
    ChannelMeanMatrix m;
    m.n_images = static_cast<std::uint32_t>(array.shape(0));
    m.n_channels = static_cast<std::uint32_t>(array.shape(1));
    m.values.resize(static_cast<std::size_t>(m.n_images) * m.n_channels);
    std::memcpy(m.values.data(), array.data(), m.values.size() * sizeof(float));
    m.source_tag = tag;
    return m;
}

py::array_t<float> array_from_matrix(const ChannelMeanMatrix& m) {
    py::array_t<float> array({static_cast<py::ssize_t>(m.n_images),
                              static_cast<py::ssize_t>(m.n_channels)});
    std::memcpy(array.mutable_data(), m.values.data(), m.values.size() * sizeof(float));
    return array;
}

LabeledBox box_from_tuple(const py::tuple& t) {
    if (t.size() != 5) throw std::invalid_argument("box must be (class_id, x_min, y_min, x_max, y_max)");
    return {t[0].cast<int>(), t[1].cast<int>(), t[2].cast<int>(), t[3].cast<int>(),
            t[4].cast<int>()};
}

}  // namespace

PYBIND11_MODULE(_repshift, m) {
    m.doc() = "representation-shift toolkit: domain shift measurement, dataset "
              "construction, weak-label tooling and evaluation statistics";

    // ---- raster / dump IO ------------------------------------------------
    m.def("read_image", [](const std::filesystem::path& p) { return array_from_image(read_image(p)); },
          py::arg("path"));
    m.def("write_image",
          [](const py::array_t<std::uint8_t, py::array::c_style>& a,
             const std::filesystem::path& p) { write_image(image_from_array(a), p); },
          py::arg("image"), py::arg("path"));
    m.def("read_mask",
          [](const std::filesystem::path& p, int num_classes) {
              return array_from_mask(read_mask(p, num_classes));
          },
          py::arg("path"), py::arg("num_classes") = 19);
    m.def("write_mask",
          [](const py::array_t<std::uint8_t, py::array::c_style>& a,
             const std::filesystem::path& p) { write_mask(mask_from_array(a), p); },
          py::arg("mask"), py::arg("path"));
    m.def("read_feature_dump",
          [](const std::filesystem::path& p) {
              const ChannelMeanMatrix m_ = read_feature_dump(p);
              return py::make_tuple(array_from_matrix(m_), m_.source_tag);
          },
          py::arg("path"), "returns (values, source_tag)");
    m.def("write_feature_dump",
          [](const py::array_t<float, py::array::c_style>& values, const std::string& tag,
             const std::filesystem::path& p) { write_feature_dump(matrix_from_array(values, tag), p); },
          py::arg("values"), py::arg("tag"), py::arg("path"));

    // ---- shift metric ------------------------------------------------------
    m.def("wasserstein1",
          [](const std::vector<double>& p, const std::vector<double>& q) {
              return wasserstein1(EmpiricalDistribution(p), EmpiricalDistribution(q));
          },
          py::arg("p"), py::arg("q"),
          "exact W1 between two empirical sample sets");
    m.def("representation_shift",
          [](const py::array_t<float, py::array::c_style>& src,
             const py::array_t<float, py::array::c_style>& tgt, const std::string& source_tag,
             const std::string& target_tag, int jobs) {
              const ShiftReport r = representation_shift(matrix_from_array(src, source_tag),
                                                         matrix_from_array(tgt, target_tag), jobs);
              py::dict out;
              out["channels"] = r.n_channels;
              out["per_channel_w"] = r.per_channel_w;
              out["representation_shift"] = r.representation_shift;
              out["source"] = r.source_tag;
              out["target"] = r.target_tag;
              return out;
          },
          py::arg("source"), py::arg("target"), py::arg("source_tag") = "",
          py::arg("target_tag") = "", py::arg("jobs") = 1);

    // ---- features ----------------------------------------------------------
    py::class_<FilterBank>(m, "FilterBank",
                           "deterministic rectified random convolutional extractor")
        .def(py::init([](std::uint64_t seed, const std::vector<int>& channels, int kernel_size,
                         int stride) {
                 FilterBankConfig config;
                 config.channels = channels;
                 config.kernel_size = kernel_size;
                 config.stride = stride;
                 return build_filter_bank(seed, config);
             }),
             py::arg("seed") = 0, py::arg("channels") = std::vector<int>{32, 64},
             py::arg("kernel_size") = 3, py::arg("stride") = 2)
        .def_property_readonly("out_channels", &FilterBank::out_channels)
        .def("extract",
             [](const FilterBank& bank, const py::array_t<std::uint8_t, py::array::c_style>& image) {
                 const FeatureMap fm = extract(bank, image_from_array(image));
                 py::array_t<float> array({fm.n_channels, fm.height, fm.width});
                 std::memcpy(array.mutable_data(), fm.values.data(),
                             fm.values.size() * sizeof(float));
                 return array;
             },
             py::arg("image"), "feature map as a (C, h, w) float32 array")
        .def("channel_means",
             [](const FilterBank& bank, const py::array_t<std::uint8_t, py::array::c_style>& image) {
                 return channel_means(extract(bank, image_from_array(image)));
             },
             py::arg("image"), "per-channel mean activations of one image");

    // ---- augmentation ops ----------------------------------------------------
    m.def("lowfreq_exchange",
          [](const py::array_t<std::uint8_t, py::array::c_style>& target,
             const py::array_t<std::uint8_t, py::array::c_style>& source, double beta) {
              return array_from_image(
                  lowfreq_exchange(image_from_array(target), image_from_array(source), {beta}));
          },
          py::arg("target"), py::arg("source"), py::arg("beta") = 0.01);
    m.def("color_augment",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, double strength,
             std::uint64_t seed) {
              return array_from_image(color_augment(image_from_array(img), strength, seed));
          },
          py::arg("image"), py::arg("strength"), py::arg("seed") = 0);
    m.def("frosted_glass",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, int radius,
             std::uint64_t seed) {
              return array_from_image(frosted_glass(image_from_array(img), radius, seed));
          },
          py::arg("image"), py::arg("radius"), py::arg("seed") = 0);
    m.def("poster",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, int levels) {
              return array_from_image(poster(image_from_array(img), levels));
          },
          py::arg("image"), py::arg("levels"));
    m.def("mural",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, int smooth_radius,
             int levels) {
              return array_from_image(mural(image_from_array(img), smooth_radius, levels));
          },
          py::arg("image"), py::arg("smooth_radius"), py::arg("levels"));

    // ---- weak labels -----------------------------------------------------------
    m.def("boxes_from_mask",
          [](const py::array_t<std::uint8_t, py::array::c_style>& mask, int connectivity,
             int min_area) {
              const auto boxes = boxes_from_mask(mask_from_array(mask), {connectivity, min_area});
              py::list out;
              for (const LabeledBox& b : boxes)
                  out.append(py::make_tuple(b.class_id, b.x_min, b.y_min, b.x_max, b.y_max));
              return out;
          },
          py::arg("mask"), py::arg("connectivity") = 8, py::arg("min_area") = 64,
          "list of (class_id, x_min, y_min, x_max, y_max)");
    m.def("grabcut_box",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, const py::tuple& box,
             int gmm_components, int max_iterations, double gamma, std::uint64_t seed) {
              GrabCutConfig config;
              config.gmm_components = gmm_components;
              config.max_iterations = max_iterations;
              config.gamma = gamma;
              config.seed = seed;
              const GrabCutResult cut =
                  grabcut_box(image_from_array(img), box_from_tuple(box), config);
              py::array_t<bool> out({cut.height, cut.width});
              bool* data = out.mutable_data();
              for (std::size_t i = 0; i < cut.foreground.size(); ++i) data[i] = cut.foreground[i];
              return out;
          },
          py::arg("image"), py::arg("box"), py::arg("gmm_components") = 5,
          py::arg("max_iterations") = 5, py::arg("gamma") = 50.0, py::arg("seed") = 0);
    m.def("pseudo_label",
          [](const py::array_t<std::uint8_t, py::array::c_style>& img, const py::list& boxes,
             int num_classes, int gmm_components, int max_iterations, double gamma,
             std::uint64_t seed) {
              std::vector<LabeledBox> parsed;
              for (const auto& item : boxes) parsed.push_back(box_from_tuple(item.cast<py::tuple>()));
              GrabCutConfig config;
              config.gmm_components = gmm_components;
              config.max_iterations = max_iterations;
              config.gamma = gamma;
              config.seed = seed;
              return array_from_mask(
                  pseudo_label(image_from_array(img), parsed, config, num_classes));
          },
          py::arg("image"), py::arg("boxes"), py::arg("num_classes") = 19,
          py::arg("gmm_components") = 5, py::arg("max_iterations") = 5, py::arg("gamma") = 50.0,
          py::arg("seed") = 0);

    // ---- evaluation ---------------------------------------------------------------
    m.def("confusion",
          [](const py::array_t<std::uint8_t, py::array::c_style>& gt,
             const py::array_t<std::uint8_t, py::array::c_style>& pred, int num_classes) {
              ConfusionMatrix cm(num_classes);
              accumulate(cm, mask_from_array(gt), mask_from_array(pred));
              py::array_t<std::uint64_t> out({num_classes, num_classes});
              std::memcpy(out.mutable_data(), cm.counts.data(),
                          cm.counts.size() * sizeof(std::uint64_t));
              return out;
          },
          py::arg("gt"), py::arg("pred"), py::arg("num_classes") = 19);
    m.def("miou",
          [](const py::array_t<std::uint64_t, py::array::c_style>& counts, bool undefined_as_zero) {
              if (counts.ndim() != 2 || counts.shape(0) != counts.shape(1))
                  throw std::invalid_argument("expected a square confusion matrix");
              ConfusionMatrix cm(static_cast<int>(counts.shape(0)));
              std::memcpy(cm.counts.data(), counts.data(),
                          cm.counts.size() * sizeof(std::uint64_t));
              const MiouResult r = miou(cm, undefined_as_zero);
              py::dict out;
              py::list per_class;
              for (int c = 0; c < cm.num_classes; ++c)
                  per_class.append(r.defined[c] ? py::object(py::float_(r.per_class[c]))
                                                : py::object(py::none()));
              out["per_class"] = per_class;
              out["miou"] = r.mean;
              out["evaluated_classes"] = r.evaluated_classes;
              return out;
          },
          py::arg("confusion"), py::arg("undefined_as_zero") = false);
    m.def("regress",
          [](const std::vector<std::pair<double, double>>& points) {
              const RegressionResult r = regress(points);
              py::dict out;
              out["slope"] = r.slope;
              out["intercept"] = r.intercept;
              out["pearson_r"] = r.pearson_r;
              out["n_points"] = r.n_points;
              return out;
          },
          py::arg("points"), "OLS fit and Pearson r of (shift, miou) pairs");

#ifdef REPSHIFT_VERSION
#define REPSHIFT_STR2(x) #x
#define REPSHIFT_STR(x) REPSHIFT_STR2(x)
    m.attr("__version__") = REPSHIFT_STR(REPSHIFT_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
