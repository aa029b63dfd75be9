#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mackboot/cond_dist.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/triangle.hpp"

namespace mackboot {

struct ResidualPool {
  std::vector<double> raw;
  std::vector<double> standardized;
  std::vector<std::size_t> excluded_columns;  // columns with sigma2_hat == 0
};

/// Pearson-type residuals sqrt(C) (F - f_hat) / sigma_hat over all observed
/// cells of non-excluded columns, recentred and rescaled to mean 0 and
/// population variance 1. Throws EmptyPool for fewer than 2 usable residuals.
ResidualPool build_residual_pool(const DevTriangle& tri, const MackFit& fit);

enum class Method { Original, Alternative, Intermediate };

// Conditional variance of the backward factor G+ given C+_{i,j+1}.
// Literal: sigma2_hat_j / C+_{i,j+1}.
// DeltaMethod: sigma2_hat_j / (C+_{i,j+1} f_hat_j^3), the first-order variance
// of 1/F when F has mean f_hat_j and variance sigma2_hat_j / C_{i,j}.
enum class BackwardVariance { Literal, DeltaMethod };

BackwardVariance parse_backward_variance(std::string_view name);
std::string backward_variance_name(BackwardVariance v);

Method parse_method(std::string_view name);
std::string method_name(Method method);

struct BootstrapOptions {
  std::size_t B = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  CondFamily family_lower;
  // Backward family (alternative) or forward upper family (intermediate).
  // Defaults to family_lower. Ignored by the original engine.
  std::optional<CondFamily> family_upper;
  BackwardVariance backward_variance = BackwardVariance::Literal;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_factors = false;
};

struct BootstrapRun {
  Method method = Method::Original;
  std::vector<double> roots;
  std::vector<double> part1;
  std::vector<double> part2;
  double center_total = 0.0;  // R_hat of the observed triangle
  std::uint64_t seed = 0;
  CondFamily family_lower;
  std::string family_upper;  // family name, or "residual" for the original engine
  // Bootstrap factor estimates per replication (B x (A-1)) when requested.
  std::vector<std::vector<double>> factors;
  SampleStats sampling;
};

BootstrapRun original_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                     const BootstrapOptions& options);
BootstrapRun alternative_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                        const BootstrapOptions& options);
BootstrapRun intermediate_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                         const BootstrapOptions& options);
BootstrapRun run_bootstrap(Method method, const DevTriangle& tri, const MackFit& fit,
                           const BootstrapOptions& options);

/// Order statistic at ceil(p * n) (1-based) of an ascending sample.
double order_quantile(const std::vector<double>& sorted, double p);

/// Equal-tailed interval [R_hat + q(alpha/2), R_hat + q(1 - alpha/2)].
std::pair<double, double> prediction_interval(const BootstrapRun& run, double point_estimate,
                                              double alpha);

}  // namespace mackboot
