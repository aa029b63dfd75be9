#include "mackboot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include "json.hpp"
#include <sstream>
#include <tuple>

#include "mackboot/error.hpp"
#include "mackboot/format.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/parallel.hpp"
#include "mackboot/stats.hpp"

namespace mackboot {

namespace {

using json = nlohmann::json;

std::uint64_t family_key(const CondFamily& f) {
  return static_cast<std::uint64_t>(f.kind) | (f.moment_match ? 0x100u : 0u);
}

std::uint64_t unit_seed(const ExperimentGrid& grid, std::size_t t, std::size_t k, std::size_t m) {
  return mix_seed(grid.seed, family_key(grid.true_families[t]), grid.n_values[k], m);
}

void validate(const ExperimentGrid& grid) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, key + ": " + why);
  };
  if (grid.true_families.empty()) fail("true_family", "at least one family required");
  if (grid.chosen_families.empty()) fail("chosen_family", "at least one family required");
  if (grid.n_values.empty()) fail("n", "at least one value required");
  if (grid.methods.empty()) fail("methods", "at least one method required");
  if (grid.M == 0) fail("M", "must be positive");
  if (grid.B < 2) fail("B", "must be at least 2");
  if (!(grid.ks_level > 0.0 && grid.ks_level < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (grid.I_base < 1) fail("I_base", "must be positive");
  if (!(grid.sigma2_scale >= 0.0)) fail("sigma2_scale", "must be >= 0");
}

double number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json unit_to_json(const UnitResult& u) {
  json metrics = json::array();
  for (const auto& s : u.metrics) {
    metrics.push_back({s.ks_p, s.ks_part1_p, s.sq_err, s.var, s.part1_var, s.part2_var,
                       s.skewness, s.excess_kurtosis});
  }
  return {{"t", u.true_index}, {"k", u.n_index}, {"m", u.sim},
          {"oracle_var", u.oracle_var}, {"reserve", u.total_reserve}, {"metrics", metrics}};
}

UnitResult unit_from_json(const json& j) {
  UnitResult u;
  u.true_index = j.at("t").get<std::size_t>();
  u.n_index = j.at("k").get<std::size_t>();
  u.sim = j.at("m").get<std::size_t>();
  u.oracle_var = number(j.at("oracle_var"));
  u.total_reserve = number(j.at("reserve"));
  for (const auto& row : j.at("metrics")) {
    SimMetrics s;
    s.ks_p = number(row.at(0));
    s.ks_part1_p = number(row.at(1));
    s.sq_err = number(row.at(2));
    s.var = number(row.at(3));
    s.part1_var = number(row.at(4));
    s.part2_var = number(row.at(5));
    s.skewness = number(row.at(6));
    s.excess_kurtosis = number(row.at(7));
    u.metrics.push_back(s);
  }
  return u;
}

double mean_squared_ordered_gap(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace

std::size_t unit_count(const ExperimentGrid& grid) {
  return grid.true_families.size() * grid.n_values.size() * grid.M;
}

UnitResult run_unit(const ExperimentGrid& grid, std::size_t t, std::size_t k, std::size_t m) {
  const CondFamily& truth = grid.true_families[t];
  const auto params =
      param_sequences(grid.I_base, grid.n_values[k], grid.setup, grid.sigma2_scale);
  const std::uint64_t key = unit_seed(grid, t, k, m);
  Stream tri_rng = derive(key, 0, Purpose::Triangle);
  const auto sim = generate_triangle(params, truth, tri_rng);
  const MackFit fit = fit_mack(sim.upper);
  const OracleRun oracle = oracle_predictive_roots(sim.upper, params, truth, grid.B, key, 1);

  UnitResult out;
  out.true_index = t;
  out.n_index = k;
  out.sim = m;
  out.oracle_var = population_variance(oracle.roots);
  out.total_reserve = fit.total_reserve;
  for (const auto& chosen : grid.chosen_families) {
    BootstrapOptions options;
    options.B = grid.B;
    options.seed = mix_seed(key, family_key(chosen));
    options.family_lower = chosen;
    options.backward_variance = grid.backward_variance;
    options.threads = 1;
    for (Method method : grid.methods) {
      const BootstrapRun run = run_bootstrap(method, sim.upper, fit, options);
      SimMetrics s;
      s.ks_p = ks_two_sample(run.roots, oracle.roots).p_value;
      s.ks_part1_p = ks_two_sample(run.part1, oracle.part1).p_value;
      s.sq_err = mean_squared_ordered_gap(run.roots, oracle.roots);
      const Moments mom = empirical_moments(run.roots);
      s.var = mom.variance;
      s.part1_var = population_variance(run.part1);
      s.part2_var = population_variance(run.part2);
      s.skewness = mom.skewness;
      s.excess_kurtosis = mom.excess_kurtosis;
      out.metrics.push_back(s);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentGrid& grid, const ExperimentIo& io) {
  validate(grid);
  const std::size_t N = grid.n_values.size();
  const std::size_t total = unit_count(grid);
  const std::size_t per_unit = grid.chosen_families.size() * grid.methods.size();
  auto index_of = [&](std::size_t t, std::size_t k, std::size_t m) {
    return (t * N + k) * grid.M + m;
  };

  std::vector<UnitResult> units(total);
  std::vector<char> done(total, 0);
  if (io.resume && !io.progress_path.empty()) {
    std::ifstream in(io.progress_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      UnitResult u;
      try {
        u = unit_from_json(json::parse(line));
      } catch (const std::exception&) {
        continue;  // torn final line of an interrupted run
      }
      if (u.true_index >= grid.true_families.size() || u.n_index >= N || u.sim >= grid.M ||
          u.metrics.size() != per_unit) {
        continue;
      }
      const std::size_t idx = index_of(u.true_index, u.n_index, u.sim);
      units[idx] = std::move(u);
      done[idx] = 1;
    }
  }

  std::ofstream progress;
  if (!io.progress_path.empty()) {
    progress.open(io.progress_path, io.resume ? std::ios::app : std::ios::trunc);
    if (!progress) throw Error(ErrorCode::IoFailure, "cannot open " + io.progress_path);
    // an interrupted run may leave a line without its newline
    if (io.resume) progress << '\n';
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < total; ++i) {
    if (!done[i]) todo.push_back(i);
  }
  std::mutex mu;
  parallel_for(todo.size(), grid.threads, [&](std::size_t q) {
    const std::size_t idx = todo[q];
    const std::size_t m = idx % grid.M;
    const std::size_t k = (idx / grid.M) % N;
    const std::size_t t = idx / (grid.M * N);
    UnitResult u = run_unit(grid, t, k, m);
    if (progress.is_open()) {
      const std::string text = unit_to_json(u).dump();
      std::lock_guard lock(mu);
      progress << text << '\n';
      progress.flush();
    }
    units[idx] = std::move(u);
  });

  ExperimentResult result;
  result.cells = summarize(grid, units);
  result.units = std::move(units);
  return result;
}

std::vector<CellSummary> summarize(const ExperimentGrid& grid,
                                   const std::vector<UnitResult>& units) {
  const std::size_t N = grid.n_values.size();
  const std::size_t K = grid.methods.size();
  std::vector<CellSummary> cells;
  for (std::size_t t = 0; t < grid.true_families.size(); ++t) {
    for (std::size_t c = 0; c < grid.chosen_families.size(); ++c) {
      for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t q = 0; q < K; ++q) {
          CellSummary cell;
          cell.setup = grid.setup;
          cell.true_family = family_name(grid.true_families[t]);
          cell.chosen_family = family_name(grid.chosen_families[c]);
          cell.n = grid.n_values[k];
          cell.method = grid.methods[q];
          cell.M = grid.M;
          cell.B = grid.B;
          double fails = 0.0;
          double fails1 = 0.0;
          double sq = 0.0;
          double rel = 0.0;
          for (std::size_t m = 0; m < grid.M; ++m) {
            const UnitResult& u = units[(t * N + k) * grid.M + m];
            const SimMetrics& s = u.metrics[c * K + q];
            if (s.ks_p >= grid.ks_level) fails += 1.0;
            if (s.ks_part1_p >= grid.ks_level) fails1 += 1.0;
            sq += s.sq_err;
            rel += s.sq_err / (u.total_reserve * u.total_reserve);
            cell.var_mean += s.var;
            cell.part1_var_mean += s.part1_var;
            cell.part2_var_mean += s.part2_var;
            cell.oracle_var_mean += u.oracle_var;
            cell.skewness_mean += s.skewness;
            cell.kurtosis_mean += s.excess_kurtosis;
          }
          const double M = static_cast<double>(grid.M);
          cell.ks_fail_rate = fails / M;
          cell.ks_part1_fail_rate = fails1 / M;
          cell.rmmse = std::sqrt(rel / M) * 1e3;
          cell.rmmse_abs = std::sqrt(sq / M);
          cell.var_mean /= M;
          cell.part1_var_mean /= M;
          cell.part2_var_mean /= M;
          cell.oracle_var_mean /= M;
          cell.skewness_mean /= M;
          cell.kurtosis_mean /= M;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream out;
  out << "setup,true_family,chosen_family,n,method,ks_fail_rate,rmmse,var_mean,part2_var_mean,"
         "ks_part1_fail_rate,part1_var_mean,oracle_var_mean,skewness_mean,kurtosis_mean,rmmse_abs,M,B\n";
  for (const auto& c : cells) {
    out << setup_name(c.setup) << ',' << c.true_family << ',' << c.chosen_family << ',' << c.n
        << ',' << method_name(c.method) << ',' << format_double(c.ks_fail_rate, 6) << ','
        << format_double(c.rmmse, 10) << ',' << format_double(c.var_mean, 10) << ','
        << format_double(c.part2_var_mean, 10) << ',' << format_double(c.ks_part1_fail_rate, 6)
        << ',' << format_double(c.part1_var_mean, 10) << ','
        << format_double(c.oracle_var_mean, 10) << ',' << format_double(c.skewness_mean, 8)
        << ',' << format_double(c.kurtosis_mean, 8) << ','
        << format_double(c.rmmse_abs, 10) << ',' << c.M << ',' << c.B << '\n';
  }
  return out.str();
}

std::string detail_csv(const ExperimentGrid& grid, const std::vector<UnitResult>& units) {
  std::ostringstream out;
  out << "setup,true_family,chosen_family,n,sim,method,ks_p,ks_part1_p,sq_err,var,part1_var,"
         "part2_var,skewness,excess_kurtosis,oracle_var\n";
  const std::size_t K = grid.methods.size();
  for (const auto& u : units) {
    for (std::size_t c = 0; c < grid.chosen_families.size(); ++c) {
      for (std::size_t q = 0; q < K; ++q) {
        const SimMetrics& s = u.metrics[c * K + q];
        out << setup_name(grid.setup) << ',' << family_name(grid.true_families[u.true_index])
            << ',' << family_name(grid.chosen_families[c]) << ',' << grid.n_values[u.n_index]
            << ',' << u.sim << ',' << method_name(grid.methods[q]) << ','
            << format_double(s.ks_p) << ',' << format_double(s.ks_part1_p) << ','
            << format_double(s.sq_err) << ',' << format_double(s.var) << ','
            << format_double(s.part1_var) << ',' << format_double(s.part2_var) << ','
            << format_double(s.skewness) << ',' << format_double(s.excess_kurtosis) << ','
            << format_double(u.oracle_var) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace mackboot
