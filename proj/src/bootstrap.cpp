#include "mackboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "mackboot/error.hpp"
#include "mackboot/parallel.hpp"
#include "mackboot/rng.hpp"

namespace mackboot {

namespace {

void check_options(const BootstrapOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "alpha must lie in (0, 1)");
  }
  if (options.B == 0) {
    throw Error(ErrorCode::InsufficientReplications, "B must be positive");
  }
}

std::size_t pick(Stream& rng, std::size_t size) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * size) >> 64);
}

// Forward completion of every row from the observed diagonal. means[d] is the
// conditional mean of the step d -> d+1; the variance is sigma2[d] / C.
std::vector<double> grow_lower(const std::vector<double>& diag, const std::vector<double>& means,
                               const std::vector<double>& sigma2, const CondFamily& family,
                               Stream& rng, SampleStats& stats) {
  const std::size_t n = diag.size();
  std::vector<double> ult(n);
  ult[0] = diag[0];
  for (std::size_t a = 1; a < n; ++a) {
    double c = diag[a];
    for (std::size_t d = n - 1 - a; d + 1 < n; ++d) {
      c *= sample(family, {means[d], sigma2[d] / c}, rng, &stats);
    }
    ult[a] = c;
  }
  return ult;
}

struct Replication {
  double part1 = 0.0;
  double part2 = 0.0;
  std::vector<double> factors;
  SampleStats stats;
};

BootstrapRun collect(Method method, const MackFit& fit, const BootstrapOptions& options,
                     std::vector<Replication>& reps, std::string family_upper) {
  BootstrapRun run;
  run.method = method;
  run.center_total = fit.total_reserve;
  run.seed = options.seed;
  run.family_lower = options.family_lower;
  run.family_upper = std::move(family_upper);
  const std::size_t B = reps.size();
  run.roots.resize(B);
  run.part1.resize(B);
  run.part2.resize(B);
  for (std::size_t b = 0; b < B; ++b) {
    run.part1[b] = reps[b].part1;
    run.part2[b] = reps[b].part2;
    run.roots[b] = reps[b].part1 + reps[b].part2;
    run.sampling.draws += reps[b].stats.draws;
    run.sampling.rejections += reps[b].stats.rejections;
    if (options.keep_factors) run.factors.push_back(std::move(reps[b].factors));
  }
  return run;
}

double weighted_sum(const std::vector<double>& diag, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t a = 0; a < diag.size(); ++a) s += diag[a] * x[a];
  return s;
}

}  // namespace

ResidualPool build_residual_pool(const DevTriangle& tri, const MackFit& fit) {
  const std::size_t n = tri.n_periods();
  ResidualPool pool;
  for (std::size_t d = 0; d + 1 < n; ++d) {
    if (!(fit.sigma2_hat[d] > 0.0)) {
      pool.excluded_columns.push_back(d);
      continue;
    }
    const double sigma = std::sqrt(fit.sigma2_hat[d]);
    for (std::size_t a = 0; a + d + 1 < n; ++a) {
      const double c = tri.at(a, d);
      const double f = tri.at(a, d + 1) / c;
      pool.raw.push_back(std::sqrt(c) * (f - fit.f_hat[d]) / sigma);
    }
  }
  const std::size_t size = pool.raw.size();
  if (size < 2) {
    throw Error(ErrorCode::EmptyPool, std::to_string(size) + " usable residuals");
  }
  double mean = 0.0;
  for (double r : pool.raw) mean += r;
  mean /= static_cast<double>(size);
  double ss = 0.0;
  for (double r : pool.raw) ss += (r - mean) * (r - mean);
  const double s = std::sqrt(ss / static_cast<double>(size));
  if (!(s > 0.0)) throw Error(ErrorCode::EmptyPool, "residuals have no spread");
  pool.standardized.reserve(size);
  for (double r : pool.raw) pool.standardized.push_back((r - mean) / s);
  return pool;
}

Method parse_method(std::string_view name) {
  if (name == "original") return Method::Original;
  if (name == "alternative") return Method::Alternative;
  if (name == "intermediate") return Method::Intermediate;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) +
                                            "' (original|alternative|intermediate)");
}

BackwardVariance parse_backward_variance(std::string_view name) {
  if (name == "literal") return BackwardVariance::Literal;
  if (name == "delta") return BackwardVariance::DeltaMethod;
  throw Error(ErrorCode::InvalidConfig,
              "unknown backward variance '" + std::string(name) + "' (literal|delta)");
}

std::string backward_variance_name(BackwardVariance v) {
  return v == BackwardVariance::Literal ? "literal" : "delta";
}

std::string method_name(Method method) {
  switch (method) {
    case Method::Original: return "original";
    case Method::Alternative: return "alternative";
    case Method::Intermediate: return "intermediate";
  }
  return "unknown";
}

BootstrapRun original_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                     const BootstrapOptions& options) {
  check_options(options);
  const ResidualPool pool = build_residual_pool(tri, fit);
  const std::size_t n = tri.n_periods();
  const std::vector<double> diag = diagonal(tri).values;
  const std::vector<double> best = tail_products(fit.f_hat);
  std::vector<double> col_sum(n - 1, 0.0);
  for (std::size_t d = 0; d + 1 < n; ++d) {
    for (std::size_t a = 0; a + d + 1 < n; ++a) col_sum[d] += tri.at(a, d);
  }

  std::vector<Replication> reps(options.B);
  parallel_for(options.B, options.threads, [&](std::size_t b) {
    Replication& rep = reps[b];
    Stream upper = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::OriginalUpper);
    std::vector<double> fstar(n - 1);
    for (std::size_t d = 0; d + 1 < n; ++d) {
      if (!(fit.sigma2_hat[d] > 0.0)) {
        fstar[d] = fit.f_hat[d];
        continue;
      }
      const double sigma = std::sqrt(fit.sigma2_hat[d]);
      double num = 0.0;
      for (std::size_t a = 0; a + d + 1 < n; ++a) {
        const double c = tri.at(a, d);
        const double r = pool.standardized[pick(upper, pool.standardized.size())];
        num += c * (fit.f_hat[d] + sigma / std::sqrt(c) * r);
      }
      fstar[d] = num / col_sum[d];
    }
    Stream lower = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::Lower);
    const auto ult = grow_lower(diag, fstar, fit.sigma2_hat, options.family_lower, lower, rep.stats);
    const auto prod = tail_products(fstar);
    double p1 = 0.0;
    for (std::size_t a = 0; a < n; ++a) p1 += ult[a] - diag[a] * prod[a];
    rep.part1 = p1;
    rep.part2 = weighted_sum(diag, prod) - weighted_sum(diag, best);
    if (options.keep_factors) rep.factors = std::move(fstar);
  });
  return collect(Method::Original, fit, options, reps, "residual");
}

BootstrapRun alternative_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                        const BootstrapOptions& options) {
  check_options(options);
  const CondFamily backward = options.family_upper.value_or(options.family_lower);
  const std::size_t n = tri.n_periods();
  for (double f : fit.f_hat) {
    if (!(f > 0.0)) throw Error(ErrorCode::InvalidMoments, "f_hat must be > 0");
  }
  const std::vector<double> diag = diagonal(tri).values;
  const std::vector<double> best = tail_products(fit.f_hat);
  const double best_sum = weighted_sum(diag, best);
  std::vector<double> back_sigma2 = fit.sigma2_hat;
  if (options.backward_variance == BackwardVariance::DeltaMethod) {
    for (std::size_t j = 0; j < back_sigma2.size(); ++j) {
      back_sigma2[j] /= fit.f_hat[j] * fit.f_hat[j] * fit.f_hat[j];
    }
  }

  std::vector<Replication> reps(options.B);
  parallel_for(options.B, options.threads, [&](std::size_t b) {
    Replication& rep = reps[b];
    Stream back = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::BackwardUpper);
    // rows of the bootstrap triangle, regenerated backwards from the diagonal
    std::vector<std::vector<double>> rows(n);
    for (std::size_t a = 0; a < n; ++a) {
      auto& row = rows[a];
      row.resize(n - a);
      row[n - 1 - a] = diag[a];
      for (std::size_t j = n - 1 - a; j-- > 0;) {
        const MomentSpec spec{1.0 / fit.f_hat[j], back_sigma2[j] / row[j + 1]};
        row[j] = row[j + 1] * sample(backward, spec, back, &rep.stats);
      }
    }
    std::vector<double> fplus(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t a = 0; a + j + 1 < n; ++a) {
        num += rows[a][j + 1];
        den += rows[a][j];
      }
      fplus[j] = num / den;
    }
    Stream lower = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::Lower);
    const auto ult =
        grow_lower(diag, fit.f_hat, fit.sigma2_hat, options.family_lower, lower, rep.stats);
    double p1 = 0.0;
    for (std::size_t a = 0; a < n; ++a) p1 += ult[a] - diag[a] * best[a];
    rep.part1 = p1;
    rep.part2 = best_sum - weighted_sum(diag, tail_products(fplus));
    if (options.keep_factors) rep.factors = std::move(fplus);
  });
  return collect(Method::Alternative, fit, options, reps, family_name(backward));
}

BootstrapRun intermediate_mack_bootstrap(const DevTriangle& tri, const MackFit& fit,
                                         const BootstrapOptions& options) {
  check_options(options);
  const CondFamily forward = options.family_upper.value_or(options.family_lower);
  const std::size_t n = tri.n_periods();
  const std::vector<double> diag = diagonal(tri).values;
  const std::vector<double> best = tail_products(fit.f_hat);
  const double best_sum = weighted_sum(diag, best);
  std::vector<double> col_sum(n - 1, 0.0);
  for (std::size_t d = 0; d + 1 < n; ++d) {
    for (std::size_t a = 0; a + d + 1 < n; ++a) col_sum[d] += tri.at(a, d);
  }

  std::vector<Replication> reps(options.B);
  parallel_for(options.B, options.threads, [&](std::size_t b) {
    Replication& rep = reps[b];
    Stream upper = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::ForwardUpper);
    std::vector<double> fstar(n - 1);
    for (std::size_t d = 0; d + 1 < n; ++d) {
      double num = 0.0;
      for (std::size_t a = 0; a + d + 1 < n; ++a) {
        const double c = tri.at(a, d);
        num += c * sample(forward, {fit.f_hat[d], fit.sigma2_hat[d] / c}, upper, &rep.stats);
      }
      fstar[d] = num / col_sum[d];
    }
    Stream lower = derive(options.seed, static_cast<std::uint32_t>(b), Purpose::Lower);
    const auto ult =
        grow_lower(diag, fit.f_hat, fit.sigma2_hat, options.family_lower, lower, rep.stats);
    double p1 = 0.0;
    for (std::size_t a = 0; a < n; ++a) p1 += ult[a] - diag[a] * best[a];
    rep.part1 = p1;
    rep.part2 = best_sum - weighted_sum(diag, tail_products(fstar));
    if (options.keep_factors) rep.factors = std::move(fstar);
  });
  return collect(Method::Intermediate, fit, options, reps, family_name(forward));
}

BootstrapRun run_bootstrap(Method method, const DevTriangle& tri, const MackFit& fit,
                           const BootstrapOptions& options) {
  switch (method) {
    case Method::Original: return original_mack_bootstrap(tri, fit, options);
    case Method::Alternative: return alternative_mack_bootstrap(tri, fit, options);
    case Method::Intermediate: return intermediate_mack_bootstrap(tri, fit, options);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

double order_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptySample, "no values");
  const double pos = std::ceil(p * static_cast<double>(sorted.size()));
  const auto k = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(sorted.size())));
  return sorted[k - 1];
}

std::pair<double, double> prediction_interval(const BootstrapRun& run, double point_estimate,
                                              double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "alpha must lie in (0, 1)");
  }
  const std::size_t B = run.roots.size();
  // tolerance so that e.g. B = 3, alpha = 2/3 is accepted despite rounding
  if (B == 0 || static_cast<double>(B) * alpha < 2.0 * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InsufficientReplications,
                "need B >= 2/alpha, got B = " + std::to_string(B));
  }
  std::vector<double> sorted = run.roots;
  std::sort(sorted.begin(), sorted.end());
  return {point_estimate + order_quantile(sorted, alpha / 2.0),
          point_estimate + order_quantile(sorted, 1.0 - alpha / 2.0)};
}

}  // namespace mackboot
