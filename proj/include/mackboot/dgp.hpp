#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mackboot/cond_dist.hpp"
#include "mackboot/rng.hpp"
#include "mackboot/triangle.hpp"

namespace mackboot {

enum class Setup { A, B };

Setup parse_setup(std::string_view name);
std::string setup_name(Setup setup);

inline constexpr double kDefaultSigma2Scale = 509518.0;

struct ParamSequences {
  std::vector<double> f_true;       // length A-1
  std::vector<double> sigma2_true;  // length A-1
  double mu0 = 0.0;
  double initial_lo = 0.0;
  double initial_hi = 0.0;

  std::size_t n_periods() const noexcept { return f_true.size() + 1; }
  /// Expected claim level per column, mu_j = mu0 * prod_{k<j} f_k.
  std::vector<double> column_means() const;
};

struct DgpConfig {
  CondFamily family;
  std::size_t I_base = 10;
  std::size_t n = 0;
  Setup setup = Setup::A;
  std::uint64_t seed = 0;
  double sigma2_scale = kDefaultSigma2Scale;

  std::size_t n_periods() const noexcept { return I_base + n + 1; }
};

/// f_j = 1 + exp(-1 - 0.2 j), sigma2_j = scale * exp(-1 - 0.7 j) for
/// j = 0 .. A-2 with A = I_base + n + 1; uniform initial claims on
/// [1.2e8, 3.5e8] (setup A) or [1.2e6, 3.5e6] (setup B).
ParamSequences param_sequences(std::size_t I_base, std::size_t n, Setup setup,
                               double sigma2_scale = kDefaultSigma2Scale);

struct SimulatedTriangle {
  DevTriangle upper;
  ClaimsRectangle full;
};

/// Draws one A x A rectangle row by row and returns it with its upper part.
SimulatedTriangle generate_triangle(const ParamSequences& params, const CondFamily& family,
                                    Stream& rng);
SimulatedTriangle generate_triangle(const DgpConfig& cfg);

struct OracleRun {
  std::vector<double> roots;  // R^(b) - R_hat, R_hat from fit_mack(tri)
  std::vector<double> part1;  // R^(b) centred at the true factors
};

/// B completions of the lower triangle from the observed diagonal under the
/// true parameters and family. Completion b uses derive(seed, b, Oracle).
OracleRun oracle_predictive_roots(const DevTriangle& tri, const ParamSequences& params,
                                  const CondFamily& family, std::size_t B, std::uint64_t seed,
                                  unsigned threads = 1);

/// Sum over rows of (final column - latest observed cell).
double realized_reserve(const ClaimsRectangle& full);

}  // namespace mackboot
