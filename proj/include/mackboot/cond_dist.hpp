#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mackboot/rng.hpp"

namespace mackboot {

enum class FamilyKind { Gamma, LogNormal, TruncNormal };

struct CondFamily {
  FamilyKind kind = FamilyKind::Gamma;
  double trunc_point = 0.1;  // TruncNormal only
  // TruncNormal only: choose the parent normal so that the *truncated* law
  // has the requested moments instead of truncating N(m, v) as is.
  bool moment_match = false;
};

struct MomentSpec {
  double mean = 1.0;
  double variance = 0.0;
};

// Gamma: first = shape, second = rate.
// LogNormal: first = mu, second = sigma^2 of the log.
// TruncNormal: first = mean, second = variance of the untruncated parent.
struct FamilyParams {
  double first = 0.0;
  double second = 0.0;
};

/// Parses "gamma" | "lognormal" | "truncnormal"; InvalidConfig otherwise.
CondFamily parse_family(std::string_view name);
std::string family_name(const CondFamily& family);

FamilyParams params_from_moments(const CondFamily& family, const MomentSpec& spec);

/// Probability mass of the parent normal at or below the truncation point.
double truncation_mass(const CondFamily& family, const MomentSpec& spec);

// Rejection counters, accumulated by callers that want the distortion report.
struct SampleStats {
  std::uint64_t draws = 0;
  std::uint64_t rejections = 0;
};

inline constexpr std::uint64_t kRejectionBudget = 1'000'000;

/// One positive draw with the requested first two moments. variance == 0
/// returns the mean exactly.
double sample(const CondFamily& family, const MomentSpec& spec, Stream& rng,
              SampleStats* stats = nullptr);

// Per-parameter-set sampler for hot loops where the same spec repeats.
double sample_with_params(const CondFamily& family, const FamilyParams& params, Stream& rng,
                          SampleStats* stats = nullptr);

double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace mackboot
