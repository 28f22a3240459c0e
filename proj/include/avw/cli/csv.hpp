#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "avw/types.hpp"

namespace avw::cli {

/// Cells of a comma-separated file. The first line is a header when any of
/// its fields fails to parse as a number.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws std::invalid_argument on ragged rows or empty input.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Inclusive 1-based column range "a..b" (or a single column "a").
struct ColumnRange {
  std::size_t first = 1;
  std::size_t last = 0;  // 0 = through the final column
};
ColumnRange parse_column_range(std::string_view text);

/// All cells as numbers, optionally restricted to a column range. Throws
/// std::invalid_argument naming the row and column of a bad cell.
Matrix numeric_block(const CsvTable& table, const ColumnRange& columns = {});

/// Splits a table on a label column into two numeric blocks. With an empty
/// `groups` the column must hold exactly two labels, taken in order of first
/// appearance; otherwise the two given labels are used and other rows skipped.
struct GroupSplit {
  std::string x_label;
  std::string y_label;
  Matrix x;
  Matrix y;
};
GroupSplit split_by_group(const CsvTable& table, const std::string& group_col,
                          const std::vector<std::string>& groups,
                          const ColumnRange& columns = {});

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Inverse of numeric_block for a header-less table.
std::string write_csv(const Matrix& values);

}  // namespace avw::cli
