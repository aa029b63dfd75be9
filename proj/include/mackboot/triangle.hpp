#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mackboot {

// Rows are accident periods (oldest first), columns are development periods.
// Row a of an A-period triangle holds the A - a cells d = 0 .. A-1-a; everything
// with a + d > A - 1 is unobserved and absent from storage.
class DevTriangle {
 public:
  DevTriangle() = default;

  /// Builds from explicit rows; throws Error unless row a has exactly A - a
  /// finite, strictly positive cells.
  explicit DevTriangle(const std::vector<std::vector<double>>& rows);

  std::size_t n_periods() const noexcept { return n_; }
  std::size_t row_length(std::size_t a) const noexcept { return n_ - a; }

  double at(std::size_t a, std::size_t d) const { return cells_[offset(a) + d]; }
  std::span<const double> row(std::size_t a) const {
    return {cells_.data() + offset(a), row_length(a)};
  }

  /// Latest observed claim of row a, i.e. cell (a, A-1-a).
  double latest(std::size_t a) const { return at(a, n_ - 1 - a); }

  std::vector<std::vector<double>> rows() const;

  bool operator==(const DevTriangle&) const = default;

 private:
  std::size_t offset(std::size_t a) const noexcept { return a * n_ - a * (a - 1) / 2; }

  std::size_t n_ = 0;
  std::vector<double> cells_;
};

// Latest observed claims. values[a] belongs to accident row a.
struct Diagonal {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }

  /// Same claims indexed by development period: entry i is the claim that has
  /// been developed i periods, i.e. values[A-1-i].
  std::vector<double> by_development() const;
};

// Observed individual development factors F(a, d) = C(a, d+1) / C(a, d).
class FactorGrid {
 public:
  FactorGrid() = default;
  explicit FactorGrid(std::vector<std::vector<double>> columns) : columns_(std::move(columns)) {}

  std::size_t n_columns() const noexcept { return columns_.size(); }
  std::span<const double> column(std::size_t d) const { return columns_[d]; }
  double at(std::size_t a, std::size_t d) const { return columns_[d][a]; }

 private:
  std::vector<std::vector<double>> columns_;
};

// Dense A x A matrix of cumulative claims: the observed triangle plus a
// realization of the lower triangle.
class ClaimsRectangle {
 public:
  ClaimsRectangle() = default;
  explicit ClaimsRectangle(std::size_t n) : n_(n), cells_(n * n, 0.0) {}

  std::size_t n_periods() const noexcept { return n_; }
  double& at(std::size_t a, std::size_t d) { return cells_[a * n_ + d]; }
  double at(std::size_t a, std::size_t d) const { return cells_[a * n_ + d]; }

  DevTriangle upper() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> cells_;
};

struct CsvOptions {
  bool header = false;
};

/// Parses the ragged CSV layout: row a carries A - a numeric cells followed by
/// empty fields. Errors name the offending line and column (1-based).
DevTriangle parse_triangle(std::string_view text, const CsvOptions& options = {});

DevTriangle read_triangle_file(const std::string& path, const CsvOptions& options = {});

/// Inverse of parse_triangle with 17 significant digits per cell.
std::string serialize_triangle(const DevTriangle& tri);

Diagonal diagonal(const DevTriangle& tri);
FactorGrid factor_grid(const DevTriangle& tri);

}  // namespace mackboot
