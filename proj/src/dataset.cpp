#include "repshift/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace repshift {

namespace {

bool has_raster_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png";
}

}  // namespace

DatasetHandle load_dataset(const std::filesystem::path& root, DatasetKind kind) {
    if (!std::filesystem::is_directory(root))
        throw std::runtime_error("dataset root is not a directory: " + root.string());

    std::vector<std::pair<std::string, std::string>> found;  // stem, filename
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (!has_raster_extension(p)) continue;
        found.emplace_back(p.stem().string(), p.filename().string());
    }
    if (found.empty()) throw std::runtime_error("empty dataset: " + root.string());

    // byte-wise lexicographic order on stems, locale-free
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < found.size(); ++i)
        if (found[i].first == found[i - 1].first)
            throw std::runtime_error("duplicate dataset entry stem: " + found[i].first);

    DatasetHandle handle;
    handle.root = root;
    handle.kind = kind;
    handle.entries.reserve(found.size());
    handle.filenames.reserve(found.size());
    for (auto& [stem, filename] : found) {
        handle.entries.push_back(std::move(stem));
        handle.filenames.push_back(std::move(filename));
    }
    return handle;
}

}  // namespace repshift
