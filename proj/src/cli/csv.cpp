#include "avw/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace avw::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (first) {
      first = false;
      width = fields.size();
      double v = 0.0;
      bool numeric = true;
      for (const auto& f : fields) numeric = numeric && parse_number(f, v);
      if (!numeric) {
        table.header = std::move(fields);
        continue;
      }
    }
    if (fields.size() != width) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(width));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.rows.empty()) throw std::invalid_argument("CSV input has no data rows");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

ColumnRange parse_column_range(std::string_view text) {
  auto parse_index = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw std::invalid_argument("column range must be a..b with 1-based indices");
    }
    return v;
  };
  ColumnRange r;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    r.first = r.last = parse_index(text);
  } else {
    r.first = parse_index(text.substr(0, dots));
    r.last = parse_index(text.substr(dots + 2));
  }
  if (r.last < r.first) throw std::invalid_argument("column range end precedes its start");
  return r;
}

namespace {

std::vector<std::size_t> selected_columns(std::size_t width, const ColumnRange& range,
                                          std::size_t skip = SIZE_MAX) {
  std::vector<std::size_t> features;
  for (std::size_t c = 0; c < width; ++c) {
    if (c != skip) features.push_back(c);
  }
  const std::size_t last = range.last == 0 ? features.size() : range.last;
  if (range.first < 1 || last > features.size() || range.first > last) {
    throw std::invalid_argument("column range exceeds the " + std::to_string(features.size()) +
                                " feature columns");
  }
  return {features.begin() + static_cast<std::ptrdiff_t>(range.first - 1),
          features.begin() + static_cast<std::ptrdiff_t>(last)};
}

void fill_row(const CsvTable& table, std::size_t r, const std::vector<std::size_t>& cols,
              Matrix& out, Eigen::Index out_row) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const std::string& cell = table.rows[r][cols[j]];
    double v = 0.0;
    if (!parse_number(cell, v) || !std::isfinite(v)) {
      throw std::invalid_argument("non-numeric or non-finite value '" + cell + "' in data row " +
                                  std::to_string(r + 1) + ", column " +
                                  std::to_string(cols[j] + 1));
    }
    out(out_row, static_cast<Eigen::Index>(j)) = v;
  }
}

}  // namespace

Matrix numeric_block(const CsvTable& table, const ColumnRange& columns) {
  const auto cols = selected_columns(table.rows.front().size(), columns);
  Matrix out(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    fill_row(table, r, cols, out, static_cast<Eigen::Index>(r));
  }
  return out;
}

GroupSplit split_by_group(const CsvTable& table, const std::string& group_col,
                          const std::vector<std::string>& groups, const ColumnRange& columns) {
  if (table.header.empty()) throw std::invalid_argument("--group-col needs a CSV header row");
  std::size_t gcol = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == group_col) gcol = c;
  }
  if (gcol == table.header.size()) {
    throw std::invalid_argument("group column '" + group_col + "' not in header");
  }
  GroupSplit split;
  if (groups.empty()) {
    std::vector<std::string> seen;
    for (const auto& row : table.rows) {
      if (std::find(seen.begin(), seen.end(), row[gcol]) == seen.end()) seen.push_back(row[gcol]);
    }
    if (seen.size() != 2) {
      throw std::invalid_argument("group column holds " + std::to_string(seen.size()) +
                                  " labels; pass --groups A,B to pick two");
    }
    split.x_label = seen[0];
    split.y_label = seen[1];
  } else {
    if (groups.size() != 2 || groups[0] == groups[1]) {
      throw std::invalid_argument("--groups needs two distinct labels");
    }
    split.x_label = groups[0];
    split.y_label = groups[1];
  }
  const auto cols = selected_columns(table.header.size(), columns, gcol);
  std::vector<std::size_t> xr;
  std::vector<std::size_t> yr;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r][gcol] == split.x_label) xr.push_back(r);
    if (table.rows[r][gcol] == split.y_label) yr.push_back(r);
  }
  if (xr.empty() || yr.empty()) throw std::invalid_argument("a requested group has no rows");
  const auto fill = [&](const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      fill_row(table, rows[i], cols, out, static_cast<Eigen::Index>(i));
    }
    return out;
  };
  split.x = fill(xr);
  split.y = fill(yr);
  return split;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string write_csv(const Matrix& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace avw::cli
