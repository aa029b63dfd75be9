// Acceptance suite. Usage: acceptance <path to mackboot CLI> [criterion numbers...]
// Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"
#include "mackboot/bootstrap.hpp"
#include "mackboot/dgp.hpp"
#include "mackboot/experiment.hpp"
#include "mackboot/format.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/stats.hpp"

namespace fs = std::filesystem;
using namespace mackboot;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string cli_path;

std::string fmt(double x, int digits = 6) { return format_double(x, digits); }

bool within_rel(double x, double target, double tol) {
  return std::abs(x - target) <= tol * std::abs(target);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mackboot_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Setup-a triangle with gamma steps, drawn from a fixed seed.
DevTriangle setup_a_triangle(std::size_t A, std::uint64_t seed) {
  DgpConfig cfg;
  cfg.I_base = 10;
  cfg.n = A - 11;
  cfg.seed = seed;
  return generate_triangle(cfg).upper;
}

double mean_first_column(const DevTriangle& tri) {
  double s = 0.0;
  for (std::size_t a = 0; a < tri.n_periods(); ++a) s += tri.at(a, 0);
  return s / static_cast<double>(tri.n_periods());
}

Outcome estimator_fit() {
  const fs::path dir = scratch("fit");
  {
    std::ofstream out(dir / "t1.csv");
    out << "100,150,180\n110,176,\n120,,\n";
  }
  const fs::path json_out = dir / "fit.json";
  const int rc = run_command(quote(cli_path) + " fit " + quote(dir / "t1.csv") + " > " +
                             quote(json_out));
  if (rc != 0) return {false, "fit exited with " + std::to_string(rc)};
  const auto j = nlohmann::json::parse(read_file(json_out));
  const std::vector<double> f = j.at("f_hat");
  const std::vector<double> s2 = j.at("sigma2_hat");
  const double total = j.at("total_reserve");
  const bool ok = f.size() == 2 && s2.size() == 2 && within_rel(f[0], 1.5523810, 1e-6) &&
                  within_rel(f[1], 1.2, 1e-6) && within_rel(s2[0], 0.5238095, 1e-6) &&
                  s2[1] == 0.0 && within_rel(total, 138.7428571, 1e-6);
  fs::remove_all(dir);
  return {ok, "f_hat=[" + fmt(f.at(0), 8) + ", " + fmt(f.at(1), 8) + "] sigma2_hat=[" +
                  fmt(s2.at(0), 8) + ", " + fmt(s2.at(1), 8) + "] total_reserve=" +
                  fmt(total, 10)};
}

Outcome residual_standardization() {
  double worst_mean = 0.0;
  double worst_var = 0.0;
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> size(3, 30);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::size_t A = size(gen);
    DgpConfig cfg;
    cfg.I_base = A - 1;
    cfg.seed = 1000 + k;
    cfg.setup = k % 2 ? Setup::B : Setup::A;
    const auto tri = generate_triangle(cfg).upper;
    const auto pool = build_residual_pool(tri, fit_mack(tri));
    worst_mean = std::max(worst_mean, std::abs(mean_of(pool.standardized)));
    worst_var = std::max(worst_var, std::abs(population_variance(pool.standardized) - 1.0));
  }
  const DevTriangle t1({{100, 150, 180}, {110, 176}, {120}});
  const auto pool = build_residual_pool(t1, fit_mack(t1));
  std::vector<double> sorted;
  for (double r : pool.standardized) sorted.push_back(r);
  std::sort(sorted.begin(), sorted.end());
  const bool t1_ok = sorted.size() == 2 && std::abs(sorted[0] + 1.0) < 1e-12 &&
                     std::abs(sorted[1] - 1.0) < 1e-12;
  return {worst_mean < 1e-10 && worst_var < 1e-10 && t1_ok,
          "max|mean|=" + fmt(worst_mean, 3) + " max|var-1|=" + fmt(worst_var, 3) +
              " example pool=" + (t1_ok ? "{-1,+1}" : "wrong")};
}

Outcome bootstrap_moments() {
  const auto tri = setup_a_triangle(11, 1);
  const auto fit = fit_mack(tri);
  BootstrapOptions opt;
  opt.B = 100000;
  opt.seed = 1;
  opt.keep_factors = true;
  const auto run = original_mack_bootstrap(tri, fit, opt);
  const double B = static_cast<double>(opt.B);

  bool factors_ok = true;
  double worst_z = 0.0;
  for (std::size_t j = 0; j < fit.f_hat.size(); ++j) {
    std::vector<double> col(opt.B);
    for (std::size_t b = 0; b < opt.B; ++b) col[b] = run.factors[b][j];
    // a column without variance is resampled to f_hat exactly; its SE is 0
    if (fit.sigma2_hat[j] == 0.0) {
      for (double f : col) factors_ok = factors_ok && f == fit.f_hat[j];
      continue;
    }
    const double gap = std::abs(mean_of(col) - fit.f_hat[j]);
    const double se = std::sqrt(population_variance(col) / B);
    if (gap > 3.0 * se) factors_ok = false;
    if (se > 0.0) worst_z = std::max(worst_z, gap / se);
  }
  const double var = population_variance(run.part1);
  const double mean = mean_of(run.part1);
  const double z_mean = std::abs(mean) / std::sqrt(var / B);
  const double limit =
      process_variance_limit(diagonal(tri).by_development(), fit.f_hat, fit.sigma2_hat);
  const double ratio = var / limit;
  return {factors_ok && z_mean <= 3.0 && std::abs(ratio - 1.0) <= 0.05,
          "max factor |z|=" + fmt(worst_z, 3) + " part1 mean |z|=" + fmt(z_mean, 3) +
              " part1 var/limit=" + fmt(ratio, 5)};
}

Outcome estimation_variance() {
  const auto tri = setup_a_triangle(41, 1);
  const auto fit = fit_mack(tri);
  const double A = static_cast<double>(tri.n_periods());
  const double xi = estimation_variance_limit_tilde(diagonal(tri).by_development(), fit.f_hat,
                                                    fit.sigma2_hat, mean_first_column(tri));
  BootstrapOptions opt;
  opt.B = 100000;
  opt.seed = 1;
  const double omb = population_variance(original_mack_bootstrap(tri, fit, opt).part2) * A / xi;
  const double amb =
      population_variance(alternative_mack_bootstrap(tri, fit, opt).part2) * A / xi;
  return {std::abs(omb - 1.0) <= 0.10 && amb < omb,
          "oMB part2 var*A/limit=" + fmt(omb, 5) + " aMB=" + fmt(amb, 5) +
              " (need oMB within 10% and aMB < oMB)"};
}

ExperimentGrid gamma_grid() {
  ExperimentGrid g;
  g.setup = Setup::A;
  g.true_families = {CondFamily{FamilyKind::Gamma}};
  g.chosen_families = {CondFamily{FamilyKind::Gamma}};
  g.n_values = {0, 40};
  g.M = 100;
  g.B = 2000;
  g.ks_level = 0.05;
  g.seed = 1;
  g.threads = 0;
  return g;
}

const std::vector<CellSummary>& gamma_cells() {
  static const std::vector<CellSummary> cells = run_experiment(gamma_grid()).cells;
  return cells;
}

const CellSummary& cell(const std::vector<CellSummary>& cells, std::size_t n, Method m) {
  for (const auto& c : cells) {
    if (c.n == n && c.method == m) return c;
  }
  throw std::runtime_error("missing cell");
}

constexpr Method kMethods[] = {Method::Original, Method::Alternative, Method::Intermediate};
constexpr const char* kShort[] = {"oMB", "aMB", "iMB"};

Outcome ks_rates() {
  const auto& cells = gamma_cells();
  const double target[2][3] = {{0.21, 0.22, 0.21}, {0.66, 0.70, 0.66}};
  const std::size_t ns[2] = {0, 40};
  bool ok = true;
  std::string detail;
  for (int r = 0; r < 2; ++r) {
    detail += "n=" + std::to_string(ns[r]) + ":";
    for (int q = 0; q < 3; ++q) {
      const double got = cell(cells, ns[r], kMethods[q]).ks_fail_rate;
      if (std::abs(got - target[r][q]) > 0.12) ok = false;
      detail += std::string(" ") + kShort[q] + "=" + fmt(got, 3) + "(" + fmt(target[r][q], 2) + ")";
    }
    detail += "; ";
  }
  const bool order = cell(cells, 40, Method::Alternative).ks_fail_rate >=
                     cell(cells, 40, Method::Original).ks_fail_rate;
  detail += std::string("aMB>=oMB at n=40: ") + (order ? "yes" : "no");
  return {ok && order, detail};
}

Outcome rmmse_cells() {
  const auto& cells = gamma_cells();
  const double target[2][3] = {{99.720, 99.706, 99.600}, {81.910, 81.667, 81.510}};
  const std::size_t ns[2] = {0, 40};
  bool ok = true;
  std::string detail;
  for (int r = 0; r < 2; ++r) {
    detail += "n=" + std::to_string(ns[r]) + ":";
    for (int q = 0; q < 3; ++q) {
      const double got = cell(cells, ns[r], kMethods[q]).rmmse;
      if (!within_rel(got, target[r][q], 0.08)) ok = false;
      detail += std::string(" ") + kShort[q] + "=" + fmt(got, 4) + "(" + fmt(target[r][q], 5) + ")";
    }
    detail += "; ";
  }
  const double amb = cell(cells, 40, Method::Alternative).rmmse;
  const bool minimal = amb <= cell(cells, 40, Method::Original).rmmse &&
                       amb <= cell(cells, 40, Method::Intermediate).rmmse;
  detail += std::string("aMB minimal at n=40: ") + (minimal ? "yes" : "no");
  return {ok && minimal, detail};
}

Outcome family_sensitivity() {
  ExperimentGrid g;
  g.setup = Setup::B;
  g.true_families = {CondFamily{FamilyKind::LogNormal}};
  g.chosen_families = {CondFamily{FamilyKind::TruncNormal}, CondFamily{FamilyKind::LogNormal}};
  g.n_values = {10};
  g.methods = {Method::Alternative};
  g.M = 100;
  g.B = 2000;
  g.seed = 1;
  g.threads = 0;
  const auto cells = run_experiment(g).cells;
  double trunc = 0.0;
  double logn = 0.0;
  for (const auto& c : cells) {
    (c.chosen_family == "truncnormal" ? trunc : logn) = c.ks_part1_fail_rate;
  }
  return {logn - trunc >= 0.10,
          "process-part KS fail rate, aMB: truncnormal=" + fmt(trunc, 3) +
              " lognormal=" + fmt(logn, 3) + " (need a gap >= 0.10)"};
}

Outcome thread_determinism() {
  const fs::path dir = scratch("threads");
  {
    std::ofstream cfg(dir / "grid.yaml");
    cfg << "setup: a\n"
           "true_family: [gamma, lognormal]\n"
           "chosen_family: [gamma, truncnormal]\n"
           "n: [0, 5]\n"
           "methods: [original, alternative, intermediate]\n"
           "M: 4\n"
           "B: 300\n"
           "seed: 7\n";
  }
  unsetenv("MACK_RESERVE_THREADS");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> outputs;
  std::string detail = "threads";
  for (unsigned t : {1u, 4u, hw}) {
    const fs::path out = dir / ("t" + std::to_string(t) + "_" + std::to_string(outputs.size()));
    const int rc = run_command(quote(cli_path) + " --threads " + std::to_string(t) +
                               " simulate --config " + quote(dir / "grid.yaml") + " --out-dir " +
                               quote(out) + " > /dev/null");
    if (rc != 0) return {false, "simulate exited with " + std::to_string(rc)};
    outputs.push_back(read_file(out / "summary.csv"));
    detail += " " + std::to_string(t);
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  fs::remove_all(dir);
  return {same, detail + (same ? ": summary.csv byte-identical" : ": summary.csv differs")};
}

Outcome ks_null_rate() {
  int rejected = 0;
  const int pairs = 1000;
  for (int k = 0; k < pairs; ++k) {
    Stream rng = derive(9, static_cast<std::uint32_t>(k), Purpose::Oracle);
    std::normal_distribution<double> z;
    std::vector<double> x(500), y(500);
    for (double& v : x) v = z(rng);
    for (double& v : y) v = z(rng);
    if (ks_two_sample(x, y).p_value < 0.05) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / pairs;
  return {rate >= 0.03 && rate <= 0.07, "rejection rate=" + fmt(rate, 3) + " (need [0.03, 0.07])"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <mackboot CLI> [criterion ...]\n";
    return 2;
  }
  cli_path = fs::absolute(argv[1]).string();
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {1, "estimator fit on the 3-period example", 1.0, estimator_fit},
      {2, "residual pool standardization", 5.0, residual_standardization},
      {3, "bootstrap moment identities (A=11, B=1e5)", 120.0, bootstrap_moments},
      {4, "estimation variance limit and ordering (A=41, B=1e5)", 600.0, estimation_variance},
      {5, "KS failure rates, setup a gamma/gamma (M=100, B=2000)", 1800.0, ks_rates},
      {6, "RMMSE, setup a gamma/gamma (M=100, B=2000)", 1800.0, rmmse_cells},
      {7, "conditional family sensitivity, setup b lognormal (A=21)", 1200.0,
       family_sensitivity},
      {8, "simulate output independent of --threads", 300.0, thread_determinism},
      {9, "KS rejection rate under the null", 60.0, ks_null_rate},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // criteria 5 and 6 share one experiment; its cost is charged to 5
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] %d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
