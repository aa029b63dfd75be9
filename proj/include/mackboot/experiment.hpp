#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mackboot/bootstrap.hpp"
#include "mackboot/cond_dist.hpp"
#include "mackboot/dgp.hpp"

namespace mackboot {

struct ExperimentGrid {
  Setup setup = Setup::A;
  std::vector<CondFamily> true_families{CondFamily{}};
  std::vector<CondFamily> chosen_families{CondFamily{}};
  std::vector<std::size_t> n_values{0};
  std::vector<Method> methods{Method::Original, Method::Alternative, Method::Intermediate};
  std::size_t M = 100;
  std::size_t B = 2000;
  double ks_level = 0.05;
  std::uint64_t seed = 0;
  std::size_t I_base = 10;
  double sigma2_scale = kDefaultSigma2Scale;
  BackwardVariance backward_variance = BackwardVariance::Literal;
  unsigned threads = 0;
};

// Per simulation, per (chosen family, method).
struct SimMetrics {
  double ks_p = 0.0;        // roots vs oracle roots
  double ks_part1_p = 0.0;  // process part vs oracle process part
  double sq_err = 0.0;      // mean squared difference of ordered roots
  double var = 0.0;
  double part1_var = 0.0;
  double part2_var = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

// One simulated triangle with all its bootstrap comparisons.
struct UnitResult {
  std::size_t true_index = 0;
  std::size_t n_index = 0;
  std::size_t sim = 0;
  double oracle_var = 0.0;
  double total_reserve = 0.0;  // R_hat of the simulated triangle
  std::vector<SimMetrics> metrics;  // chosen-major, method-minor
};

struct CellSummary {
  Setup setup = Setup::A;
  std::string true_family;
  std::string chosen_family;
  std::size_t n = 0;
  Method method = Method::Original;
  double ks_fail_rate = 0.0;
  double ks_part1_fail_rate = 0.0;
  double rmmse = 0.0;      // relative to R_hat per simulation, in units of 1e-3
  double rmmse_abs = 0.0;  // claim units
  double var_mean = 0.0;
  double part1_var_mean = 0.0;
  double part2_var_mean = 0.0;
  double oracle_var_mean = 0.0;
  double skewness_mean = 0.0;
  double kurtosis_mean = 0.0;
  std::size_t M = 0;
  std::size_t B = 0;
};

struct ExperimentIo {
  std::string progress_path;  // JSON lines, one per finished unit; empty = none
  bool resume = false;        // reuse units already present in progress_path
};

std::size_t unit_count(const ExperimentGrid& grid);

/// Simulates and evaluates a single unit. Pure function of (grid, indices).
UnitResult run_unit(const ExperimentGrid& grid, std::size_t true_index, std::size_t n_index,
                    std::size_t sim);

struct ExperimentResult {
  std::vector<CellSummary> cells;
  std::vector<UnitResult> units;  // ordered by (true family, n, sim)
};

ExperimentResult run_experiment(const ExperimentGrid& grid, const ExperimentIo& io = {});

std::vector<CellSummary> summarize(const ExperimentGrid& grid,
                                   const std::vector<UnitResult>& units);

std::string summary_csv(const std::vector<CellSummary>& cells);
std::string detail_csv(const ExperimentGrid& grid, const std::vector<UnitResult>& units);

}  // namespace mackboot
