#include "mackboot/cond_dist.hpp"

#include <cmath>
#include <random>

#include "mackboot/error.hpp"

namespace mackboot {

namespace {

void check_spec(const CondFamily& family, const MomentSpec& spec) {
  if (!(spec.mean > 0.0) || !std::isfinite(spec.mean)) {
    throw Error(ErrorCode::InvalidMoments, "mean must be finite and > 0");
  }
  if (!(spec.variance >= 0.0) || !std::isfinite(spec.variance)) {
    throw Error(ErrorCode::InvalidMoments, "variance must be finite and >= 0");
  }
  if (family.kind == FamilyKind::TruncNormal) {
    if (family.trunc_point < 0.0) {
      throw Error(ErrorCode::InvalidMoments, "truncation point must be >= 0");
    }
    if (spec.mean <= family.trunc_point) {
      throw Error(ErrorCode::InvalidMoments, "mean must exceed the truncation point");
    }
  }
}

// Hazard of the standard normal at x, phi(x) / (1 - Phi(x)).
double hazard(double x) {
  const double tail = 0.5 * std::erfc(x / std::sqrt(2.0));
  if (tail < 1e-300) return x;  // asymptotic
  return normal_pdf(x) / tail;
}

FamilyParams match_truncated(double m, double v, double a) {
  double mu = m;
  double s = std::sqrt(v);
  for (int it = 0; it < 500; ++it) {
    const double alpha = (a - mu) / s;
    const double lambda = hazard(alpha);
    const double shrink = 1.0 + alpha * lambda - lambda * lambda;
    if (!(shrink > 0.0)) break;
    const double s_next = std::sqrt(v / shrink);
    const double mu_next = m - s_next * lambda;
    if (std::abs(mu_next - mu) <= 1e-14 * std::abs(m) && std::abs(s_next - s) <= 1e-14 * s) {
      return {mu_next, s_next * s_next};
    }
    mu = mu_next;
    s = s_next;
  }
  throw Error(ErrorCode::NumericFailure,
              "truncated-normal moment matching did not converge (mean " + std::to_string(m) +
                  ", variance " + std::to_string(v) + ")");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

CondFamily parse_family(std::string_view name) {
  if (name == "gamma") return {FamilyKind::Gamma};
  if (name == "lognormal") return {FamilyKind::LogNormal};
  if (name == "truncnormal") return {FamilyKind::TruncNormal};
  throw Error(ErrorCode::InvalidConfig,
              "unknown family '" + std::string(name) + "' (gamma|lognormal|truncnormal)");
}

std::string family_name(const CondFamily& family) {
  switch (family.kind) {
    case FamilyKind::Gamma: return "gamma";
    case FamilyKind::LogNormal: return "lognormal";
    case FamilyKind::TruncNormal: return "truncnormal";
  }
  return "unknown";
}

FamilyParams params_from_moments(const CondFamily& family, const MomentSpec& spec) {
  check_spec(family, spec);
  const double m = spec.mean;
  const double v = spec.variance;
  switch (family.kind) {
    case FamilyKind::Gamma:
      if (v == 0.0) throw Error(ErrorCode::InvalidMoments, "gamma needs variance > 0");
      return {m * m / v, m / v};
    case FamilyKind::LogNormal: {
      const double s2 = std::log1p(v / (m * m));
      return {std::log(m) - 0.5 * s2, s2};
    }
    case FamilyKind::TruncNormal:
      if (family.moment_match && v > 0.0) return match_truncated(m, v, family.trunc_point);
      return {m, v};
  }
  return {};
}

double truncation_mass(const CondFamily& family, const MomentSpec& spec) {
  if (family.kind != FamilyKind::TruncNormal) return 0.0;
  const auto p = params_from_moments(family, spec);
  if (p.second == 0.0) return 0.0;
  return normal_cdf((family.trunc_point - p.first) / std::sqrt(p.second));
}

double sample_with_params(const CondFamily& family, const FamilyParams& params, Stream& rng,
                          SampleStats* stats) {
  switch (family.kind) {
    case FamilyKind::Gamma: {
      std::gamma_distribution<double> dist(params.first, 1.0 / params.second);
      if (stats) ++stats->draws;
      return dist(rng);
    }
    case FamilyKind::LogNormal: {
      std::lognormal_distribution<double> dist(params.first, std::sqrt(params.second));
      if (stats) ++stats->draws;
      return dist(rng);
    }
    case FamilyKind::TruncNormal: {
      std::normal_distribution<double> dist(params.first, std::sqrt(params.second));
      for (std::uint64_t tries = 0; tries < kRejectionBudget; ++tries) {
        const double x = dist(rng);
        if (x > family.trunc_point) {
          if (stats) ++stats->draws;
          return x;
        }
        if (stats) ++stats->rejections;
      }
      throw Error(ErrorCode::RejectionBudgetExceeded,
                  "no draw above " + std::to_string(family.trunc_point) + " in " +
                      std::to_string(kRejectionBudget) + " attempts");
    }
  }
  return 0.0;
}

double sample(const CondFamily& family, const MomentSpec& spec, Stream& rng,
              SampleStats* stats) {
  check_spec(family, spec);
  if (spec.variance == 0.0) {
    if (stats) ++stats->draws;
    return spec.mean;
  }
  return sample_with_params(family, params_from_moments(family, spec), rng, stats);
}

}  // namespace mackboot
