#pragma once

#include <cstddef>
#include <vector>

namespace mackboot {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Two-sample KS test with the asymptotic p-value at
/// lambda = D sqrt(n1 n2 / (n1 + n2)). Throws EmptySample.
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

/// sqrt(mean over m of mean over b of (boot_(b) - oracle_(b))^2) with both
/// samples of every simulation sorted first. Throws ShapeMismatch.
double rmmse(const std::vector<std::vector<double>>& boot,
             const std::vector<std::vector<double>>& oracle);

/// Finite-triangle process variance. diag_by_dev[i] is the latest claim that
/// has been developed i periods; f and sigma2 have one entry per column step.
double process_variance_limit(const std::vector<double>& diag_by_dev,
                              const std::vector<double>& f, const std::vector<double>& sigma2);

/// Finite-triangle asymptotic estimation variance, with column levels
/// mu_j = mu0 prod_{k<j} f_k. Divide by A to compare with raw variances.
double estimation_variance_limit_tilde(const std::vector<double>& diag_by_dev,
                                       const std::vector<double>& f,
                                       const std::vector<double>& sigma2, double mu0);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // divisor n
  double skewness = 0.0;
  double excess_kurtosis = 0.0;  // NaN for n < 4
};

Moments empirical_moments(const std::vector<double>& sample);

double mean_of(const std::vector<double>& x);
double population_variance(const std::vector<double>& x);

}  // namespace mackboot
