#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace repshift {

enum class DatasetKind { images, masks };

/// Immutable listing of one raster directory. Entries are file stems,
/// byte-wise lexicographically sorted and duplicate-free.
struct DatasetHandle {
    std::filesystem::path root;
    DatasetKind kind = DatasetKind::images;
    std::vector<std::string> entries;
    std::vector<std::string> filenames;  // parallel to entries

    std::size_t size() const { return entries.size(); }
    std::filesystem::path path_of(std::size_t i) const { return root / filenames[i]; }
};

/// Lists all files with a recognized raster extension under root.
/// Throws if root is missing or the listing comes up empty.
DatasetHandle load_dataset(const std::filesystem::path& root, DatasetKind kind);

}  // namespace repshift
