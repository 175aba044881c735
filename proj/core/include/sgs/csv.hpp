#pragma once

#include <filesystem>
#include <string>

#include "sgs/dataset.hpp"

namespace sgs::csv {

/// Numeric CSV with an optional header row (detected when the first line has
/// a non-numeric field). Ragged or malformed rows raise ParseError naming the
/// file and 1-based line number.
Matrix read_matrix(const std::filesystem::path& path);

/// Single-column numeric CSV (optional header).
Vector read_vector(const std::filesystem::path& path);

/// Two-column `variable_index,group_id` CSV with 0-based variable indices.
/// Group ids are arbitrary integers; they are relabelled 0..m-1 in ascending
/// id order. Every variable 0..p-1 must appear exactly once.
GroupPartition read_groups(const std::filesystem::path& path, std::size_t p);

GroupedDataset load_dataset(const std::filesystem::path& x_path,
                            const std::filesystem::path& y_path,
                            const std::filesystem::path& groups_path,
                            Family family);

} // namespace sgs::csv
