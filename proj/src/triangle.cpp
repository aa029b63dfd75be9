#include "mackboot/triangle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mackboot/error.hpp"

namespace mackboot {

namespace {

std::string position(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

void check_cell(double value, std::size_t a, std::size_t d) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonNumericCell,
                "non-finite cell at row " + std::to_string(a) + ", column " + std::to_string(d));
  }
  if (value <= 0.0) {
    throw Error(ErrorCode::NonPositiveCell,
                "cell at row " + std::to_string(a) + ", column " + std::to_string(d) +
                    " must be > 0");
  }
}

}  // namespace

DevTriangle::DevTriangle(const std::vector<std::vector<double>>& rows) : n_(rows.size()) {
  cells_.reserve(n_ * (n_ + 1) / 2);
  for (std::size_t a = 0; a < n_; ++a) {
    if (rows[a].size() != n_ - a) {
      throw Error(ErrorCode::RaggedShapeMismatch,
                  "row " + std::to_string(a) + " must have " + std::to_string(n_ - a) +
                      " cells, found " + std::to_string(rows[a].size()));
    }
    for (std::size_t d = 0; d < rows[a].size(); ++d) {
      check_cell(rows[a][d], a, d);
      cells_.push_back(rows[a][d]);
    }
  }
}

std::vector<std::vector<double>> DevTriangle::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    const auto r = row(a);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

std::vector<double> Diagonal::by_development() const {
  return {values.rbegin(), values.rend()};
}

DevTriangle ClaimsRectangle::upper() const {
  std::vector<std::vector<double>> rows(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t d = 0; d + a < n_; ++d) rows[a].push_back(at(a, d));
  }
  return DevTriangle(rows);
}

DevTriangle parse_triangle(std::string_view text, const CsvOptions& options) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  const std::size_t first_line = options.header ? 1 : 0;
  if (lines.size() <= first_line) {
    throw Error(ErrorCode::TriangleTooSmall, "no data rows");
  }
  const std::size_t n = lines.size() - first_line;

  std::vector<std::vector<double>> rows(n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t line_no = a + first_line + 1;
    const auto fields = split_fields(lines[a + first_line]);
    if (fields.size() > n) {
      throw Error(ErrorCode::NonSquare, position(line_no, n + 1) + ": " +
                                            std::to_string(fields.size()) + " fields but " +
                                            std::to_string(n) + " accident rows");
    }
    bool seen_empty = false;
    for (std::size_t d = 0; d < fields.size(); ++d) {
      const auto field = fields[d];
      if (field.empty()) {
        seen_empty = true;
        continue;
      }
      if (seen_empty) {
        throw Error(ErrorCode::RaggedShapeMismatch,
                    position(line_no, d + 1) + ": value after an empty cell");
      }
      double value = 0.0;
      const auto* end = field.data() + field.size();
      const auto [ptr, ec] = std::from_chars(field.data(), end, value);
      if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw Error(ErrorCode::NonNumericCell,
                    position(line_no, d + 1) + ": '" + std::string(field) + "'");
      }
      if (value <= 0.0) {
        throw Error(ErrorCode::NonPositiveCell,
                    position(line_no, d + 1) + ": " + std::string(field) + " must be > 0");
      }
      rows[a].push_back(value);
    }
    if (a == 0 && rows[0].size() != n) {
      throw Error(ErrorCode::NonSquare, position(line_no, 1) + ": first row has " +
                                            std::to_string(rows[0].size()) + " cells but " +
                                            std::to_string(n) + " accident rows");
    }
    if (rows[a].size() != n - a) {
      throw Error(ErrorCode::RaggedShapeMismatch,
                  position(line_no, rows[a].size() + 1) + ": row " + std::to_string(a) +
                      " must have " + std::to_string(n - a) + " cells, found " +
                      std::to_string(rows[a].size()));
    }
  }
  return DevTriangle(rows);
}

DevTriangle read_triangle_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "reading " + path);
  return parse_triangle(buffer.str(), options);
}

std::string serialize_triangle(const DevTriangle& tri) {
  std::string out;
  const std::size_t n = tri.n_periods();
  char buf[64];
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t d = 0; d < n; ++d) {
      if (d > 0) out.push_back(',');
      if (d < tri.row_length(a)) {
        const auto [ptr, ec] =
            std::to_chars(buf, buf + sizeof(buf), tri.at(a, d), std::chars_format::general, 17);
        out.append(buf, ptr);
      }
    }
    out.push_back('\n');
  }
  return out;
}

Diagonal diagonal(const DevTriangle& tri) {
  Diagonal diag;
  diag.values.reserve(tri.n_periods());
  for (std::size_t a = 0; a < tri.n_periods(); ++a) diag.values.push_back(tri.latest(a));
  return diag;
}

FactorGrid factor_grid(const DevTriangle& tri) {
  const std::size_t n = tri.n_periods();
  std::vector<std::vector<double>> columns(n > 0 ? n - 1 : 0);
  for (std::size_t d = 0; d + 1 < n; ++d) {
    columns[d].reserve(n - 1 - d);
    for (std::size_t a = 0; a + d + 1 < n; ++a) {
      columns[d].push_back(tri.at(a, d + 1) / tri.at(a, d));
    }
  }
  return FactorGrid(std::move(columns));
}

}  // namespace mackboot
