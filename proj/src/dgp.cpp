#include "mackboot/dgp.hpp"

#include <cmath>

#include "mackboot/error.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/parallel.hpp"

namespace mackboot {

Setup parse_setup(std::string_view name) {
  if (name == "a" || name == "A") return Setup::A;
  if (name == "b" || name == "B") return Setup::B;
  throw Error(ErrorCode::InvalidConfig, "unknown setup '" + std::string(name) + "' (a|b)");
}

std::string setup_name(Setup setup) { return setup == Setup::A ? "a" : "b"; }

std::vector<double> ParamSequences::column_means() const {
  std::vector<double> mu(n_periods());
  mu[0] = mu0;
  for (std::size_t j = 1; j < mu.size(); ++j) mu[j] = mu[j - 1] * f_true[j - 1];
  return mu;
}

ParamSequences param_sequences(std::size_t I_base, std::size_t n, Setup setup,
                               double sigma2_scale) {
  const std::size_t A = I_base + n + 1;
  ParamSequences p;
  p.f_true.resize(A - 1);
  p.sigma2_true.resize(A - 1);
  for (std::size_t j = 0; j + 1 < A; ++j) {
    const double jj = static_cast<double>(j);
    p.f_true[j] = 1.0 + std::exp(-1.0 - 0.2 * jj);
    p.sigma2_true[j] = sigma2_scale * std::exp(-1.0 - 0.7 * jj);
  }
  if (setup == Setup::A) {
    p.initial_lo = 120e6;
    p.initial_hi = 350e6;
  } else {
    p.initial_lo = 120e4;
    p.initial_hi = 350e4;
  }
  p.mu0 = 0.5 * (p.initial_lo + p.initial_hi);
  return p;
}

SimulatedTriangle generate_triangle(const ParamSequences& params, const CondFamily& family,
                                    Stream& rng) {
  const std::size_t A = params.n_periods();
  ClaimsRectangle full(A);
  for (std::size_t a = 0; a < A; ++a) {
    double c = params.initial_lo + (params.initial_hi - params.initial_lo) * rng.uniform();
    full.at(a, 0) = c;
    for (std::size_t d = 0; d + 1 < A; ++d) {
      c *= sample(family, {params.f_true[d], params.sigma2_true[d] / c}, rng);
      full.at(a, d + 1) = c;
    }
  }
  return {full.upper(), std::move(full)};
}

SimulatedTriangle generate_triangle(const DgpConfig& cfg) {
  const auto params = param_sequences(cfg.I_base, cfg.n, cfg.setup, cfg.sigma2_scale);
  Stream rng = derive(cfg.seed, 0, Purpose::Triangle);
  return generate_triangle(params, cfg.family, rng);
}

OracleRun oracle_predictive_roots(const DevTriangle& tri, const ParamSequences& params,
                                  const CondFamily& family, std::size_t B, std::uint64_t seed,
                                  unsigned threads) {
  const std::size_t A = tri.n_periods();
  if (params.n_periods() < A) {
    throw Error(ErrorCode::ShapeMismatch, "parameter sequences shorter than the triangle");
  }
  const MackFit fit = fit_mack(tri);
  const auto diag = diagonal(tri).values;
  const auto best = tail_products(fit.f_hat);
  const std::vector<double> f_used(params.f_true.begin(), params.f_true.begin() + (A - 1));
  const auto truth = tail_products(f_used);
  double best_sum = 0.0;
  double truth_sum = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    best_sum += diag[a] * best[a];
    truth_sum += diag[a] * truth[a];
  }

  OracleRun out;
  out.roots.resize(B);
  out.part1.resize(B);
  parallel_for(B, threads, [&](std::size_t b) {
    Stream rng = derive(seed, static_cast<std::uint32_t>(b), Purpose::Oracle);
    double total = diag[0];
    for (std::size_t a = 1; a < A; ++a) {
      double c = diag[a];
      for (std::size_t d = A - 1 - a; d + 1 < A; ++d) {
        c *= sample(family, {params.f_true[d], params.sigma2_true[d] / c}, rng);
      }
      total += c;
    }
    out.roots[b] = total - best_sum;
    out.part1[b] = total - truth_sum;
  });
  return out;
}

double realized_reserve(const ClaimsRectangle& full) {
  const std::size_t A = full.n_periods();
  double r = 0.0;
  for (std::size_t a = 0; a < A; ++a) r += full.at(a, A - 1) - full.at(a, A - 1 - a);
  return r;
}

}  // namespace mackboot
