#include "mackboot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mackboot/error.hpp"

namespace mackboot {

namespace {

void check_lengths(const std::vector<double>& diag, const std::vector<double>& f,
                   const std::vector<double>& sigma2) {
  if (f.size() != sigma2.size()) {
    throw Error(ErrorCode::ShapeMismatch, "f and sigma2 differ in length");
  }
  if (diag.empty() || f.size() + 1 < diag.size()) {
    throw Error(ErrorCode::ShapeMismatch,
                "need at least " + std::to_string(diag.size() ? diag.size() - 1 : 0) +
                    " factors for a diagonal of " + std::to_string(diag.size()));
  }
}

}  // namespace

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double p = 0.0;
  if (lambda < 1.0) {
    // Jacobi theta form of the CDF; the alternating series converges slowly here.
    const double pi = std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi * pi / (8.0 * lambda * lambda));
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    p = 1.0 - cdf;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      p += sign * term;
      sign = -sign;
      if (k >= 25 && term < 1e-12) break;
    }
    p *= 2.0;
  }
  return std::clamp(p, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::EmptySample, "both samples need values");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult out;
  out.statistic = d;
  out.n1 = x.size();
  out.n2 = y.size();
  out.p_value = kolmogorov_survival(d * std::sqrt(n1 * n2 / (n1 + n2)));
  return out;
}

double rmmse(const std::vector<std::vector<double>>& boot,
             const std::vector<std::vector<double>>& oracle) {
  if (boot.size() != oracle.size() || boot.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "simulation counts differ or are zero");
  }
  double acc = 0.0;
  for (std::size_t m = 0; m < boot.size(); ++m) {
    if (boot[m].size() != oracle[m].size() || boot[m].empty()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "simulation " + std::to_string(m) + " has mismatched sample sizes");
    }
    auto b = boot[m];
    auto o = oracle[m];
    std::sort(b.begin(), b.end());
    std::sort(o.begin(), o.end());
    double s = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) s += (b[k] - o[k]) * (b[k] - o[k]);
    acc += s / static_cast<double>(b.size());
  }
  return std::sqrt(acc / static_cast<double>(boot.size()));
}

double process_variance_limit(const std::vector<double>& diag_by_dev,
                              const std::vector<double>& f, const std::vector<double>& sigma2) {
  check_lengths(diag_by_dev, f, sigma2);
  const std::size_t L = f.size();
  double total = 0.0;
  for (std::size_t i = 0; i < diag_by_dev.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = i; j < L; ++j) {
      double before = 1.0;
      for (std::size_t k = i; k < j; ++k) before *= f[k];
      double after = 1.0;
      for (std::size_t l = j + 1; l < L; ++l) after *= f[l] * f[l];
      inner += before * sigma2[j] * after;
    }
    total += diag_by_dev[i] * inner;
  }
  return total;
}

double estimation_variance_limit_tilde(const std::vector<double>& diag_by_dev,
                                       const std::vector<double>& f,
                                       const std::vector<double>& sigma2, double mu0) {
  check_lengths(diag_by_dev, f, sigma2);
  if (!(mu0 > 0.0)) throw Error(ErrorCode::InvalidMoments, "mu0 must be > 0");
  const std::size_t L = f.size();
  std::vector<double> mu(L);
  double level = mu0;
  for (std::size_t j = 0; j < L; ++j) {
    mu[j] = level;
    level *= f[j];
  }
  // term[h] = sum_{j >= h} (sigma2_j / mu_j) prod_{l >= h, l != j} f_l^2
  std::vector<double> term(L + 1, 0.0);
  for (std::size_t h = 0; h < L; ++h) {
    double s = 0.0;
    for (std::size_t j = h; j < L; ++j) {
      double prod = 1.0;
      for (std::size_t l = h; l < L; ++l) {
        if (l != j) prod *= f[l] * f[l];
      }
      s += sigma2[j] / mu[j] * prod;
    }
    term[h] = s;
  }
  const std::size_t n = diag_by_dev.size();
  double total = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const std::size_t lo = std::min(i1, i2);
      const std::size_t hi = std::max(i1, i2);
      double bridge = 1.0;
      for (std::size_t m = lo; m < hi; ++m) bridge *= f[m];
      total += diag_by_dev[i1] * diag_by_dev[i2] * term[hi] * bridge;
    }
  }
  return total;
}

double mean_of(const std::vector<double>& x) {
  if (x.empty()) throw Error(ErrorCode::EmptySample, "no values");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_variance(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

Moments empirical_moments(const std::vector<double>& sample) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "no values");
  if (sample.size() < 2) throw Error(ErrorCode::SampleTooSmall, "need at least 2 values");
  const double n = static_cast<double>(sample.size());
  Moments out;
  out.mean = mean_of(sample);
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : sample) {
    const double d = v - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  out.variance = m2;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = sample.size() >= 4 ? m4 / (m2 * m2) - 3.0 : nan;
  } else {
    out.skewness = nan;
    out.excess_kurtosis = nan;
  }
  return out;
}

}  // namespace mackboot
