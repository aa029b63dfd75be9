#pragma once

#include <cstddef>
#include <vector>

#include "mackboot/triangle.hpp"

namespace mackboot {

struct MackFit {
  std::vector<double> f_hat;       // length A-1
  std::vector<double> sigma2_hat;  // length A-1, last entry 0
  std::vector<double> ultimates;   // length A
  std::vector<double> reserves;    // length A
  double total_reserve = 0.0;

  std::size_t n_periods() const noexcept { return ultimates.size(); }
};

struct PredictiveRoot {
  double total = 0.0;
  double part1 = 0.0;  // process
  double part2 = 0.0;  // estimation
};

/// Chain-ladder factors, Mack variance parameters and best-estimate reserves.
/// Throws TriangleTooSmall for A < 2.
MackFit fit_mack(const DevTriangle& tri);

/// Products of factors over the unobserved steps of each row:
/// out[a] = prod_{d >= A-1-a} factors[d], out[0] = 1.
std::vector<double> tail_products(const std::vector<double>& factors);

/// total = sum_a diag[a] * (realized growth - prod f_hat),
/// part1 = sum_a diag[a] * (realized growth - center_products[a]).
PredictiveRoot predictive_root(const DevTriangle& tri, const MackFit& fit,
                               const ClaimsRectangle& realized,
                               const std::vector<double>& center_products);

}  // namespace mackboot
