#include "mackboot/mack.hpp"

#include <cmath>
#include <string>

#include "mackboot/error.hpp"

namespace mackboot {

MackFit fit_mack(const DevTriangle& tri) {
  const std::size_t n = tri.n_periods();
  if (n < 2) {
    throw Error(ErrorCode::TriangleTooSmall,
                "need at least 2 periods, got " + std::to_string(n));
  }
  MackFit fit;
  fit.f_hat.assign(n - 1, 0.0);
  fit.sigma2_hat.assign(n - 1, 0.0);

  for (std::size_t d = 0; d + 1 < n; ++d) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t a = 0; a + d + 1 < n; ++a) {
      num += tri.at(a, d + 1);
      den += tri.at(a, d);
    }
    fit.f_hat[d] = num / den;
  }

  for (std::size_t d = 0; d + 2 < n; ++d) {
    const double f = fit.f_hat[d];
    double acc = 0.0;
    for (std::size_t a = 0; a + d + 1 < n; ++a) {
      const double c = tri.at(a, d);
      const double dev = tri.at(a, d + 1) / c - f;
      acc += c * dev * dev;
    }
    fit.sigma2_hat[d] = acc / static_cast<double>(n - 2 - d);
  }

  const auto growth = tail_products(fit.f_hat);
  fit.ultimates.resize(n);
  fit.reserves.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double latest = tri.latest(a);
    fit.ultimates[a] = latest * growth[a];
    fit.reserves[a] = fit.ultimates[a] - latest;
    fit.total_reserve += fit.reserves[a];
  }
  return fit;
}

std::vector<double> tail_products(const std::vector<double>& factors) {
  const std::size_t n = factors.size() + 1;
  std::vector<double> out(n, 1.0);
  // row a needs steps d = A-1-a .. A-2; accumulate from the last column down
  double prod = 1.0;
  for (std::size_t a = 1; a < n; ++a) {
    prod *= factors[n - 1 - a];
    out[a] = prod;
  }
  return out;
}

PredictiveRoot predictive_root(const DevTriangle& tri, const MackFit& fit,
                               const ClaimsRectangle& realized,
                               const std::vector<double>& center_products) {
  const std::size_t n = tri.n_periods();
  if (realized.n_periods() != n || center_products.size() != n ||
      fit.n_periods() != n) {
    throw Error(ErrorCode::DiagonalMismatch, "dimension mismatch between triangle and inputs");
  }
  const auto best = tail_products(fit.f_hat);
  PredictiveRoot root;
  for (std::size_t a = 0; a < n; ++a) {
    const double latest = tri.latest(a);
    const double seen = realized.at(a, n - 1 - a);
    if (seen != latest) {
      throw Error(ErrorCode::DiagonalMismatch,
                  "row " + std::to_string(a) + " realized diagonal " + std::to_string(seen) +
                      " differs from observed " + std::to_string(latest));
    }
    const double ultimate = realized.at(a, n - 1);
    root.total += ultimate - latest * best[a];
    root.part1 += ultimate - latest * center_products[a];
  }
  root.part2 = root.total - root.part1;
  return root;
}

}  // namespace mackboot
