#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mackboot/bootstrap.hpp"
#include "mackboot/error.hpp"
#include "mackboot/experiment.hpp"
#include "mackboot/format.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/parallel.hpp"
#include "mackboot/stats.hpp"
#include "mackboot/triangle.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mackboot;

namespace {

unsigned effective_threads(unsigned flag) {
  if (const char* env = std::getenv("MACK_RESERVE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig,
                std::string("MACK_RESERVE_THREADS must be a positive integer, got '") + env + "'");
  }
  return resolve_threads(flag);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir + ": " + ec.message());
}

// ---- fit -----------------------------------------------------------------

struct FitArgs {
  std::string triangle;
  std::string out;
  bool header = false;
};

json fit_to_json(const MackFit& fit) {
  return {{"f_hat", fit.f_hat},         {"sigma2_hat", fit.sigma2_hat},
          {"ultimates", fit.ultimates}, {"reserves", fit.reserves},
          {"total_reserve", fit.total_reserve}};
}

int cmd_fit(const FitArgs& args) {
  const auto tri = read_triangle_file(args.triangle, {args.header});
  const auto fit = fit_mack(tri);
  const std::string text = fit_to_json(fit).dump(2) + "\n";
  std::cout << text;
  if (!args.out.empty()) {
    cli::RunManifest manifest("fit", {{"triangle", args.triangle}, {"header", args.header}}, 0);
    write_text(args.out, text);
    manifest.add_output(args.out);
    manifest.finish(args.out + ".manifest.json");
  }
  return 0;
}

// ---- bootstrap -----------------------------------------------------------

struct BootstrapArgs {
  std::string triangle;
  std::string method = "original";
  std::string family = "gamma";
  std::string family_backward;
  std::string backward_variance = "literal";
  std::size_t B = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool emit_parts = false;
  bool header = false;
  unsigned threads = 0;
};

int cmd_bootstrap(const BootstrapArgs& args) {
  const auto tri = read_triangle_file(args.triangle, {args.header});
  const auto fit = fit_mack(tri);
  BootstrapOptions options;
  options.B = args.B;
  options.alpha = args.alpha;
  options.seed = args.seed;
  options.family_lower = parse_family(args.family);
  if (!args.family_backward.empty()) options.family_upper = parse_family(args.family_backward);
  options.backward_variance = parse_backward_variance(args.backward_variance);
  options.threads = effective_threads(args.threads);
  const Method method = parse_method(args.method);
  if (args.B == 0) throw Error(ErrorCode::InsufficientReplications, "B must be positive");

  const auto run = run_bootstrap(method, tri, fit, options);
  const auto [lo, hi] = prediction_interval(run, fit.total_reserve, args.alpha);
  std::vector<double> sorted = run.roots;
  std::sort(sorted.begin(), sorted.end());
  static const std::vector<std::pair<std::string, double>> levels = {
      {"0.5%", 0.005}, {"1%", 0.01},   {"2.5%", 0.025}, {"5%", 0.05},
      {"25%", 0.25},   {"50%", 0.5},   {"75%", 0.75},   {"95%", 0.95},
      {"97.5%", 0.975}, {"99%", 0.99}, {"99.5%", 0.995}};
  nlohmann::ordered_json quantiles = nlohmann::ordered_json::object();
  for (const auto& [key, p] : levels) quantiles[key] = order_quantile(sorted, p);

  nlohmann::ordered_json doc = {{"method", method_name(method)},
              {"B", args.B},
              {"seed", args.seed},
              {"alpha", args.alpha},
              {"family", family_name(run.family_lower)},
              {"family_upper", run.family_upper},
              {"total_reserve", fit.total_reserve},
              {"quantiles", quantiles},
              {"interval", {lo, hi}},
              {"variance", population_variance(run.roots)},
              {"part1_variance", population_variance(run.part1)},
              {"part2_variance", population_variance(run.part2)},
              {"rejection_fraction",
               run.sampling.draws + run.sampling.rejections == 0
                   ? 0.0
                   : static_cast<double>(run.sampling.rejections) /
                         static_cast<double>(run.sampling.draws + run.sampling.rejections)}};
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;

  if (!args.out_dir.empty()) {
    ensure_dir(args.out_dir);
    cli::RunManifest manifest("bootstrap",
                              {{"triangle", args.triangle},
                               {"method", args.method},
                               {"family", args.family},
                               {"family_backward", args.family_backward},
                               {"backward_variance", args.backward_variance},
                               {"B", args.B},
                               {"alpha", args.alpha},
                               {"emit_parts", args.emit_parts}},
                              args.seed);
    const std::string json_path = (fs::path(args.out_dir) / "bootstrap.json").string();
    write_text(json_path, text);
    manifest.add_output(json_path);

    std::string csv = args.emit_parts ? "root,part1,part2\n" : "root\n";
    for (std::size_t b = 0; b < run.roots.size(); ++b) {
      csv += format_double(run.roots[b]);
      if (args.emit_parts) {
        csv += ',' + format_double(run.part1[b]) + ',' + format_double(run.part2[b]);
      }
      csv += '\n';
    }
    const std::string csv_path = (fs::path(args.out_dir) / "roots.csv").string();
    write_text(csv_path, csv);
    manifest.add_output(csv_path);
    manifest.finish((fs::path(args.out_dir) / "manifest.json").string());
  }
  return 0;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  unsigned threads = 0;
  bool resume = false;
  bool detail = false;
};

std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) {
  std::vector<std::string> out;
  if (node.IsScalar()) {
    out.push_back(node.as<std::string>());
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(item.as<std::string>());
  } else {
    throw Error(ErrorCode::InvalidConfig, key + ": expected a value or a list");
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, key + ": list is empty");
  return out;
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::InvalidConfig, key + ": invalid value '" +
                                              (node.IsScalar() ? node.Scalar() : "?") + "'");
  }
}

struct LoadedConfig {
  ExperimentGrid grid;
  std::string out_dir;
  json snapshot;
};

LoadedConfig load_config(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::FileNotFound, path);
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
  if (!root.IsMap()) throw Error(ErrorCode::InvalidConfig, path + ": expected key: value pairs");

  static const std::set<std::string> known = {
      "setup", "true_family", "chosen_family", "n",       "methods",
      "M",     "B",           "alpha",         "seed",    "out_dir",
      "I_base", "sigma2_scale", "trunc_point", "truncnormal_moment_match",
      "backward_variance"};
  static const std::set<std::string> required = {"setup", "true_family", "chosen_family", "n",
                                                 "methods", "M", "B", "seed"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) throw Error(ErrorCode::InvalidConfig, key + ": unknown key");
  }
  for (const auto& key : required) {
    if (!root[key]) throw Error(ErrorCode::InvalidConfig, key + ": missing required key");
  }

  LoadedConfig cfg;
  ExperimentGrid& g = cfg.grid;
  g.setup = parse_setup(scalar<std::string>(root["setup"], "setup"));
  double trunc = 0.1;
  bool match = false;
  if (root["trunc_point"]) trunc = scalar<double>(root["trunc_point"], "trunc_point");
  if (root["truncnormal_moment_match"]) {
    match = scalar<bool>(root["truncnormal_moment_match"], "truncnormal_moment_match");
  }
  auto families = [&](const std::string& key) {
    std::vector<CondFamily> out;
    for (const auto& name : string_list(root[key], key)) {
      CondFamily f;
      try {
        f = parse_family(name);
      } catch (const Error&) {
        throw Error(ErrorCode::InvalidConfig, key + ": unknown family '" + name + "'");
      }
      f.trunc_point = trunc;
      f.moment_match = match;
      out.push_back(f);
    }
    return out;
  };
  g.true_families = families("true_family");
  g.chosen_families = families("chosen_family");
  g.n_values.clear();
  for (const auto& v : string_list(root["n"], "n")) {
    try {
      std::size_t pos = 0;
      const long n = std::stol(v, &pos);
      if (pos != v.size() || n < 0) throw std::invalid_argument(v);
      g.n_values.push_back(static_cast<std::size_t>(n));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "n: invalid value '" + v + "'");
    }
  }
  g.methods.clear();
  for (const auto& name : string_list(root["methods"], "methods")) {
    try {
      g.methods.push_back(parse_method(name));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, "methods: unknown method '" + name + "'");
    }
  }
  g.M = scalar<std::size_t>(root["M"], "M");
  g.B = scalar<std::size_t>(root["B"], "B");
  g.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["alpha"]) g.ks_level = scalar<double>(root["alpha"], "alpha");
  if (root["I_base"]) g.I_base = scalar<std::size_t>(root["I_base"], "I_base");
  if (root["sigma2_scale"]) g.sigma2_scale = scalar<double>(root["sigma2_scale"], "sigma2_scale");
  if (root["backward_variance"]) {
    const auto name = scalar<std::string>(root["backward_variance"], "backward_variance");
    try {
      g.backward_variance = parse_backward_variance(name);
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, "backward_variance: unknown value '" + name + "'");
    }
  }
  if (root["out_dir"]) cfg.out_dir = scalar<std::string>(root["out_dir"], "out_dir");

  json fams_true = json::array();
  for (const auto& f : g.true_families) fams_true.push_back(family_name(f));
  json fams_chosen = json::array();
  for (const auto& f : g.chosen_families) fams_chosen.push_back(family_name(f));
  json methods = json::array();
  for (auto m : g.methods) methods.push_back(method_name(m));
  cfg.snapshot = {{"setup", setup_name(g.setup)},
                  {"true_family", fams_true},
                  {"chosen_family", fams_chosen},
                  {"n", g.n_values},
                  {"methods", methods},
                  {"M", g.M},
                  {"B", g.B},
                  {"alpha", g.ks_level},
                  {"seed", g.seed},
                  {"I_base", g.I_base},
                  {"sigma2_scale", g.sigma2_scale},
                  {"trunc_point", trunc},
                  {"truncnormal_moment_match", match},
                  {"backward_variance", backward_variance_name(g.backward_variance)}};
  return cfg;
}

int cmd_simulate(const SimulateArgs& args) {
  LoadedConfig cfg = load_config(args.config);
  const std::string out_dir = args.out_dir.empty() ? cfg.out_dir : args.out_dir;
  if (out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "out_dir: missing required key");
  cfg.grid.threads = effective_threads(args.threads);
  ensure_dir(out_dir);

  cli::RunManifest manifest("simulate", cfg.snapshot, cfg.grid.seed);
  ExperimentIo io;
  io.progress_path = (fs::path(out_dir) / "progress.jsonl").string();
  io.resume = args.resume;
  const auto result = run_experiment(cfg.grid, io);

  const std::string summary_path = (fs::path(out_dir) / "summary.csv").string();
  write_text(summary_path, summary_csv(result.cells));
  manifest.add_output(summary_path);
  if (args.detail) {
    const std::string detail_path = (fs::path(out_dir) / "detail.csv").string();
    write_text(detail_path, detail_csv(cfg.grid, result.units));
    manifest.add_output(detail_path);
  }
  manifest.finish((fs::path(out_dir) / "manifest.json").string());
  std::cout << summary_csv(result.cells);
  return 0;
}

// ---- evaluate ------------------------------------------------------------

std::vector<double> read_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path);
  std::vector<double> out;
  std::string line;
  std::size_t index = 0;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      first = false;
      double probe = 0.0;
      const auto& f0 = fields.empty() ? std::string() : fields[0];
      const auto res = std::from_chars(f0.data(), f0.data() + f0.size(), probe);
      if (res.ec != std::errc() || res.ptr != f0.data() + f0.size()) {
        const auto it = std::find(fields.begin(), fields.end(), column);
        if (it == fields.end()) {
          throw Error(ErrorCode::InvalidConfig, path + ": no column '" + column + "'");
        }
        index = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
    }
    if (index >= fields.size()) {
      throw Error(ErrorCode::NonNumericCell, path + ": line " + std::to_string(line_no) +
                                                 " has no column " + std::to_string(index + 1));
    }
    double v = 0.0;
    const auto& f = fields[index];
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw Error(ErrorCode::NonNumericCell,
                  path + ": line " + std::to_string(line_no) + ": '" + f + "'");
    }
    out.push_back(v);
  }
  return out;
}

struct EvaluateArgs {
  std::string x;
  std::string y;
  std::string column = "root";
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const auto ks = ks_two_sample(read_column(args.x, args.column), read_column(args.y, args.column));
  const json doc = {{"statistic", ks.statistic}, {"p_value", ks.p_value}, {"n1", ks.n1},
                    {"n2", ks.n2}};
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!args.out.empty()) {
    cli::RunManifest manifest("evaluate", {{"x", args.x}, {"y", args.y}, {"column", args.column}},
                              0);
    write_text(args.out, text);
    manifest.add_output(args.out);
    manifest.finish(args.out + ".manifest.json");
  }
  return 0;
}

// ---- report --------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> summaries;
  std::vector<std::string> roots;
  std::string out_dir;
  std::size_t bins = 50;
};

using Row = std::map<std::string, std::string>;

std::vector<Row> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path);
  std::vector<Row> rows;
  std::vector<std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (header.empty()) {
      header = fields;
      continue;
    }
    Row row;
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string abbreviation(const std::string& method) {
  if (method == "original") return "oMB";
  if (method == "alternative") return "aMB";
  if (method == "intermediate") return "iMB";
  return method;
}

// One pivot table: rows (setup, true family, n), columns (chosen family, method).
void pivot(const std::vector<Row>& rows, const std::string& metric, std::ostringstream& md,
           std::ostringstream& csv) {
  std::vector<std::string> col_keys;
  std::vector<std::string> row_keys;
  std::map<std::pair<std::string, std::string>, std::string> cells;
  for (const auto& r : rows) {
    const auto get = [&](const std::string& k) {
      const auto it = r.find(k);
      return it == r.end() ? std::string() : it->second;
    };
    const std::string col = get("chosen_family") + " " + abbreviation(get("method"));
    const std::string row = get("setup") + "," + get("true_family") + "," + get("n");
    if (std::find(col_keys.begin(), col_keys.end(), col) == col_keys.end()) col_keys.push_back(col);
    if (std::find(row_keys.begin(), row_keys.end(), row) == row_keys.end()) row_keys.push_back(row);
    cells[{row, col}] = get(metric);
  }
  md << "\n### " << metric << "\n\n| setup | true family | n |";
  for (const auto& c : col_keys) md << ' ' << c << " |";
  md << "\n|---|---|---|";
  for (std::size_t i = 0; i < col_keys.size(); ++i) md << "---|";
  md << '\n';
  csv << "metric,setup,true_family,n";
  for (const auto& c : col_keys) csv << ',' << c;
  csv << '\n';
  for (const auto& r : row_keys) {
    std::string a, b, c;
    std::stringstream ss(r);
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    md << "| " << a << " | " << b << " | " << c << " |";
    csv << metric << ',' << r;
    for (const auto& col : col_keys) {
      const auto it = cells.find({r, col});
      std::string v = it == cells.end() ? "" : it->second;
      if (!v.empty()) {
        try {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.3f", std::stod(v));
          v = buf;
        } catch (const std::exception&) {
        }
      }
      md << ' ' << v << " |";
      csv << ',' << v;
    }
    md << '\n';
    csv << '\n';
  }
}

int cmd_report(const ReportArgs& args) {
  ensure_dir(args.out_dir);
  cli::RunManifest manifest("report", {{"summaries", args.summaries}, {"roots", args.roots},
                                       {"bins", args.bins}},
                            0);
  if (!args.summaries.empty()) {
    std::vector<Row> rows;
    for (const auto& path : args.summaries) {
      auto part = read_csv_rows(path);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    std::ostringstream md;
    std::ostringstream csv;
    md << "# Simulation summary\n";
    for (const char* metric : {"ks_fail_rate", "rmmse", "ks_part1_fail_rate", "var_mean",
                               "part2_var_mean", "skewness_mean", "kurtosis_mean"}) {
      pivot(rows, metric, md, csv);
    }
    const std::string md_path = (fs::path(args.out_dir) / "tables.md").string();
    const std::string csv_path = (fs::path(args.out_dir) / "tables.csv").string();
    write_text(md_path, md.str());
    write_text(csv_path, csv.str());
    manifest.add_output(md_path);
    manifest.add_output(csv_path);
  }
  for (std::size_t i = 0; i < args.roots.size(); ++i) {
    const auto values = read_column(args.roots[i], "root");
    if (values.empty()) throw Error(ErrorCode::EmptySample, args.roots[i]);
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double width = (*mx - lo) > 0 ? (*mx - lo) / static_cast<double>(args.bins) : 1.0;
    std::vector<double> counts(args.bins, 0.0);
    for (double v : values) {
      auto k = static_cast<std::size_t>((v - lo) / width);
      counts[std::min(k, args.bins - 1)] += 1.0;
    }
    std::string out = "x,y\n";
    for (std::size_t k = 0; k < args.bins; ++k) {
      const double x = lo + (static_cast<double>(k) + 0.5) * width;
      const double y = counts[k] / (static_cast<double>(values.size()) * width);
      out += format_double(x, 10) + ',' + format_double(y, 10) + '\n';
    }
    const std::string path =
        (fs::path(args.out_dir) / ("density_" + std::to_string(i) + ".csv")).string();
    write_text(path, out);
    manifest.add_output(path);
  }
  manifest.finish((fs::path(args.out_dir) / "manifest.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-ladder reserving with Mack-type bootstraps"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Estimate chain-ladder factors and reserves");
  fit->add_option("triangle", fit_args.triangle, "Triangle CSV")->required();
  fit->add_option("--out", fit_args.out, "Write the fit JSON (and a manifest) here");
  fit->add_flag("--header", fit_args.header, "Skip the first line of the CSV");

  BootstrapArgs boot_args;
  auto* boot = app.add_subcommand("bootstrap", "Bootstrap the predictive root of the reserve");
  boot->add_option("triangle", boot_args.triangle, "Triangle CSV")->required();
  boot->add_option("--method", boot_args.method, "original|alternative|intermediate");
  boot->add_option("--family", boot_args.family, "gamma|lognormal|truncnormal");
  boot->add_option("--family-backward", boot_args.family_backward,
                   "Upper-triangle family (defaults to --family)");
  boot->add_option("--backward-variance", boot_args.backward_variance,
                   "Backward factor variance: literal|delta");
  boot->add_option("--B", boot_args.B, "Replications");
  boot->add_option("--alpha", boot_args.alpha, "Interval level");
  boot->add_option("--seed", boot_args.seed, "Master seed")->required();
  boot->add_option("--out-dir", boot_args.out_dir, "Directory for JSON, roots CSV, manifest");
  boot->add_flag("--emit-parts", boot_args.emit_parts, "Add part1/part2 columns to roots.csv");
  boot->add_flag("--header", boot_args.header, "Skip the first line of the CSV");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Run a simulation grid");
  sim->add_option("--config", sim_args.config, "YAML config")->required();
  sim->add_option("--out-dir", sim_args.out_dir, "Overrides out_dir from the config");
  sim->add_flag("--resume", sim_args.resume, "Reuse finished units from progress.jsonl");
  sim->add_flag("--detail", sim_args.detail, "Write per-simulation metrics");

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "Two-sample KS test between root files");
  eval->add_option("x", eval_args.x)->required();
  eval->add_option("y", eval_args.y)->required();
  eval->add_option("--column", eval_args.column, "Column name when the files have a header");
  eval->add_option("--out", eval_args.out, "Write the result JSON here");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Tables and plot data from simulation output");
  report->add_option("--summary", report_args.summaries, "summary.csv files");
  report->add_option("--roots", report_args.roots, "roots CSV files to turn into densities");
  report->add_option("--out-dir", report_args.out_dir)->required();
  report->add_option("--bins", report_args.bins)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    boot_args.threads = threads;
    sim_args.threads = threads;
    if (*fit) return cmd_fit(fit_args);
    if (*boot) return cmd_bootstrap(boot_args);
    if (*sim) return cmd_simulate(sim_args);
    if (*eval) return cmd_evaluate(eval_args);
    if (*report) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: IoFailure: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IoFailure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: NumericFailure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
