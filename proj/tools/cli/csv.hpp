#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include <hdcp/model.hpp>

namespace hdcp::cli {

// Comma-separated numeric table; a first row with any non-numeric cell is
// treated as a header. Returns rows x columns.
Matrix read_table(std::istream& in);
Matrix read_table(const std::filesystem::path& path);

// Rows are time points and columns components, unless `transpose`.
// Returns the d x T panel matrix.
Matrix read_panel(const std::filesystem::path& path, bool transpose);

// A single row or single column of numbers.
Vector read_vector(const std::filesystem::path& path);

}  // namespace hdcp::cli
