#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "vqr/artifact.hpp"
#include "vqr/dataset.hpp"
#include "vqr/errors.hpp"
#include "vqr/fit.hpp"
#include "vqr/grid.hpp"
#include "vqr/hash.hpp"
#include "vqr/lp.hpp"
#include "vqr/math.hpp"
#include "vqr/oracle.hpp"
#include "vqr/scalar_qr.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

double parse_double(const std::string& token, const std::string& what) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw vqr::ValidationError(what + ": '" + token + "' is not a number");
  }
  return value;
}

long parse_long(const std::string& token, const std::string& what) {
  long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw vqr::ValidationError(what + ": '" + token + "' is not an integer");
  }
  return value;
}

// "20x20" / "99" -> tensor grid (shape length must match d);
// "sampled:200" -> uniform draws seeded by --seed.
vqr::RankGrid parse_grid(const std::string& spec, int d, std::uint64_t seed) {
  if (spec.rfind("sampled:", 0) == 0) {
    const long m = parse_long(spec.substr(8), "--grid");
    if (m < 1) throw vqr::ValidationError("--grid: sampled grid needs at least one atom");
    return vqr::sampled_grid(static_cast<int>(m), d, seed);
  }
  std::vector<int> shape;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t cross = spec.find('x', start);
    const std::string token =
        cross == std::string::npos ? spec.substr(start) : spec.substr(start, cross - start);
    const long count = parse_long(token, "--grid");
    if (count < 1) throw vqr::ValidationError("--grid: counts must be positive");
    shape.push_back(static_cast<int>(count));
    if (cross == std::string::npos) break;
    start = cross + 1;
  }
  if (static_cast<int>(shape.size()) != d) {
    throw vqr::ValidationError("--grid: shape has " + std::to_string(shape.size()) +
                               " dimensions but the response has " + std::to_string(d));
  }
  return vqr::tensor_grid(shape);
}

// Probe regressor vector for surface/diagnose: either explicit values for the
// non-intercept columns, or per-column sample quantiles of the regenerated
// feature matrix.
Eigen::VectorXd probe_regressor(const vqr::VqrFit& fit, const std::string& x_spec,
                                double x_quantile, bool have_quantile,
                                const std::string& data_path) {
  const int p = fit.p();
  Eigen::VectorXd x(p);
  x[0] = 1.0;
  if (have_quantile) {
    if (!(x_quantile >= 0.0 && x_quantile <= 1.0)) {
      throw vqr::ValidationError("--x-quantile must lie in [0, 1]");
    }
    if (p == 1) return x;
    if (data_path.empty()) {
      throw vqr::ValidationError("--x-quantile needs --data (and --x feature terms) to locate the probe");
    }
    const vqr::Table raw = vqr::read_csv(data_path);
    const Eigen::MatrixXd X = vqr::FeatureMap::parse(x_spec).apply(raw);
    if (static_cast<int>(X.cols()) != p) {
      throw vqr::ValidationError("--x terms produce " + std::to_string(X.cols()) +
                                 " regressors but the fit has " + std::to_string(p));
    }
    for (int l = 1; l < p; ++l) x[l] = vqr::sample_quantile(X.col(l), x_quantile);
    return x;
  }
  const std::vector<std::string> tokens = split_commas(x_spec);
  if (static_cast<int>(tokens.size()) != p - 1) {
    throw vqr::ValidationError("--x: expected " + std::to_string(p - 1) +
                               " regressor values, got " + std::to_string(tokens.size()));
  }
  for (int l = 1; l < p; ++l) x[l] = parse_double(tokens[l - 1], "--x");
  return x;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vqr::IoError("cannot open '" + path + "' for writing");
  out << j.dump(1) << '\n';
  if (!out) throw vqr::IoError("write failure on '" + path + "'");
}

struct FitCmd {
  std::string data;
  std::string y;
  std::string x;
  std::string weights = "uniform";
  std::string grid;
  std::string out = ".";
  std::string dump_lp;
  double tol = 1e-9;
  int max_iter = 200;
  std::uint64_t seed = 0;
};

int cmd_fit(const FitCmd& cfg, const std::vector<std::string>& args) {
  const vqr::Dataset data =
      vqr::load_dataset(cfg.data, split_commas(cfg.y), vqr::FeatureMap::parse(cfg.x), cfg.weights);
  const vqr::RankGrid grid = parse_grid(cfg.grid, data.d(), cfg.seed);

  std::filesystem::create_directories(cfg.out);
  const std::string fit_path = (std::filesystem::path(cfg.out) / "fit.json").string();
  const std::string residual_path =
      (std::filesystem::path(cfg.out) / "residuals.json").string();

  std::vector<std::string> outputs;
  if (!cfg.dump_lp.empty()) {
    // Original-unit program, so external solvers can reproduce fit.objective.
    vqr::write_lp_format(vqr::assemble_primal(data, grid), cfg.dump_lp);
    outputs.push_back(cfg.dump_lp);
  }

  vqr::FitOptions options;
  options.tol = cfg.tol;
  options.max_iter = cfg.max_iter;
  options.want_beta = grid.is_tensor() || data.p() == 1;
  const vqr::VqrFit fit = vqr::fit(data, grid, options);

  vqr::save_fit(fit_path, fit);
  outputs.push_back(fit_path);

  json residuals;
  residuals["status"] = "optimal";
  residuals["objective"] = fit.objective;
  residuals["primal_inf"] = fit.report.primal_inf;
  residuals["dual_inf"] = fit.report.dual_inf;
  residuals["gap"] = fit.report.gap;
  residuals["iterations"] = fit.report.iterations;
  residuals["message"] = fit.report.message;
  residuals["marginal_error"] = fit.plan.marginal_error;
  residuals["mass_error"] = fit.plan.mass_error;
  residuals["mean_independence_error"] = fit.plan.mean_independence_error;
  write_json_file(residual_path, residuals);
  outputs.push_back(residual_path);

  vqr::RunManifest manifest;
  manifest.command = "fit";
  manifest.args = args;
  manifest.inputs = {cfg.data};
  manifest.outputs = outputs;
  manifest.options = {{"y", cfg.y},         {"x", cfg.x},   {"weights", cfg.weights},
                      {"grid", cfg.grid},   {"tol", cfg.tol}, {"max_iter", cfg.max_iter},
                      {"seed", cfg.seed},   {"out", cfg.out}};
  vqr::write_manifest((std::filesystem::path(cfg.out) / "manifest.json").string(), manifest);

  std::cout << "fit: optimal in " << fit.report.iterations << " iterations, objective "
            << fit.objective << "\n"
            << "fit: residuals primal " << fit.report.primal_inf << ", dual "
            << fit.report.dual_inf << ", gap " << fit.report.gap << "\n"
            << "fit: wrote " << fit_path << "\n";
  return 0;
}

struct SurfaceCmd {
  std::string fit;
  std::string x;
  std::string data;
  double x_quantile = 0.5;
  bool have_quantile = false;
  std::string out = "surface.csv";
};

int cmd_surface(const SurfaceCmd& cfg, const std::vector<std::string>& args) {
  const vqr::VqrFit fit = vqr::load_fit(cfg.fit);
  if (!fit.has_beta) {
    throw vqr::CapabilityError(
        "surface: the fit artifact has no coefficients (sampled grid); refit on a tensor grid");
  }
  const Eigen::VectorXd x =
      probe_regressor(fit, cfg.x, cfg.x_quantile, cfg.have_quantile, cfg.data);
  vqr::write_csv(cfg.out, vqr::quantile_surface_table(fit, x));

  vqr::RunManifest manifest;
  manifest.command = "surface";
  manifest.args = args;
  manifest.inputs = {cfg.fit};
  if (!cfg.data.empty()) manifest.inputs.push_back(cfg.data);
  manifest.outputs = {cfg.out};
  json probe = json::array();
  for (long l = 0; l < x.size(); ++l) probe.push_back(x[l]);
  manifest.options = {{"x_probe", probe}, {"out", cfg.out}};
  if (cfg.have_quantile) manifest.options["x_quantile"] = cfg.x_quantile;
  vqr::write_manifest(vqr::manifest_path_for(cfg.out), manifest);

  std::cout << "surface: wrote " << cfg.out << "\n";
  return 0;
}

struct RanksCmd {
  std::string fit;
  std::string out = "ranks.csv";
};

int cmd_ranks(const RanksCmd& cfg, const std::vector<std::string>& args) {
  const vqr::VqrFit fit = vqr::load_fit(cfg.fit);
  const Eigen::MatrixXd ranks = vqr::barycentric_ranks(fit);

  vqr::Table table;
  for (int r = 0; r < fit.d(); ++r) table.names.push_back("rank" + std::to_string(r + 1));
  table.values = ranks;
  vqr::write_csv(cfg.out, table);

  vqr::RunManifest manifest;
  manifest.command = "ranks";
  manifest.args = args;
  manifest.inputs = {cfg.fit};
  manifest.outputs = {cfg.out};
  manifest.options = {{"out", cfg.out}};
  vqr::write_manifest(vqr::manifest_path_for(cfg.out), manifest);

  std::cout << "ranks: wrote " << cfg.out << "\n";
  return 0;
}

struct DiagnoseCmd {
  std::string fit;
  std::string x;
  std::string data;
  double x_quantile = 0.5;
  bool have_quantile = false;
  int lattice = 10;
  std::string out = "diagnostics.json";
};

int cmd_diagnose(const DiagnoseCmd& cfg, const std::vector<std::string>& args) {
  const vqr::VqrFit fit = vqr::load_fit(cfg.fit);
  if (!fit.has_beta) {
    throw vqr::CapabilityError(
        "diagnose: the fit artifact has no coefficients (sampled grid); refit on a tensor grid");
  }
  const Eigen::VectorXd x =
      probe_regressor(fit, cfg.x, cfg.x_quantile, cfg.have_quantile, cfg.data);

  json report;
  json probe = json::array();
  for (long l = 0; l < x.size(); ++l) probe.push_back(x[l]);
  report["x"] = probe;

  const vqr::MonotonicityReport mono = vqr::monotonicity_report(fit, x);
  report["monotonicity"] = {{"checked", mono.checked},
                            {"violations", mono.violations},
                            {"fraction", mono.fraction},
                            {"worst", mono.worst}};

  if (fit.grid.is_tensor() && fit.d() == 2 && fit.grid.shape[0] >= 3 &&
      fit.grid.shape[1] >= 3) {
    const vqr::CrossPartialReport cp = vqr::cross_partial(fit, x);
    json values = json::array();
    for (long i = 0; i < cp.value.rows(); ++i) {
      json row = json::array();
      for (long c = 0; c < cp.value.cols(); ++c) row.push_back(cp.value(i, c));
      values.push_back(std::move(row));
    }
    report["cross_partial"] = {{"total", cp.total},
                               {"negative", cp.negative},
                               {"fraction", cp.total > 0
                                                ? static_cast<double>(cp.negative) / cp.total
                                                : 0.0},
                               {"min_value", cp.min_value},
                               {"tolerance", cp.tolerance},
                               {"values", std::move(values)}};
  }

  const Eigen::MatrixXd ranks = vqr::barycentric_ranks(fit);
  json uniformity = json::array();
  for (int r = 0; r < fit.d(); ++r) {
    uniformity.push_back(vqr::kolmogorov_uniform_distance(ranks.col(r)));
  }
  report["rank_uniformity"] = std::move(uniformity);

  if (fit.d() == 2) {
    const vqr::CopulaReport cop = vqr::empirical_copula(ranks.col(0), ranks.col(1), cfg.lattice);
    report["copula"] = {{"lattice", cop.lattice},
                        {"max_marginal_dev_1", cop.max_marginal_dev_1},
                        {"max_marginal_dev_2", cop.max_marginal_dev_2}};
  }

  write_json_file(cfg.out, report);

  vqr::RunManifest manifest;
  manifest.command = "diagnose";
  manifest.args = args;
  manifest.inputs = {cfg.fit};
  if (!cfg.data.empty()) manifest.inputs.push_back(cfg.data);
  manifest.outputs = {cfg.out};
  manifest.options = {{"out", cfg.out}, {"lattice", cfg.lattice}};
  if (cfg.have_quantile) manifest.options["x_quantile"] = cfg.x_quantile;
  vqr::write_manifest(vqr::manifest_path_for(cfg.out), manifest);

  std::cout << "diagnose: monotonicity violations " << mono.violations << " of "
            << mono.checked << ", wrote " << cfg.out << "\n";
  return 0;
}

struct QrCmd {
  std::string data;
  std::string y;
  std::string x;
  std::string weights = "uniform";
  int t_levels = 19;
  double tol = 1e-9;
  int max_iter = 200;
  std::string compare;
  std::string out = ".";
};

int cmd_qr(const QrCmd& cfg, const std::vector<std::string>& args) {
  const vqr::Dataset data =
      vqr::load_dataset(cfg.data, split_commas(cfg.y), vqr::FeatureMap::parse(cfg.x), cfg.weights);
  vqr::QrOptions options;
  options.tol = cfg.tol;
  options.max_iter = cfg.max_iter;
  const vqr::QrProcess process =
      vqr::qr_process(data, vqr::midpoint_t_grid(cfg.t_levels), options);

  std::filesystem::create_directories(cfg.out);
  const auto out_path = [&cfg](const char* name) {
    return (std::filesystem::path(cfg.out) / name).string();
  };
  std::vector<std::string> outputs;

  vqr::Table beta_table;
  beta_table.names.push_back("t");
  for (const auto& name : data.x_names) beta_table.names.push_back(name);
  beta_table.values.resize(process.beta.rows(), 1 + process.beta.cols());
  beta_table.values.col(0) = process.t_grid;
  beta_table.values.rightCols(process.beta.cols()) = process.beta;
  vqr::write_csv(out_path("qr_beta.csv"), beta_table);
  outputs.push_back(out_path("qr_beta.csv"));

  vqr::Table rank_table;
  rank_table.names = {"u_tilde"};
  rank_table.values = process.u_tilde;
  vqr::write_csv(out_path("qr_ranks.csv"), rank_table);
  outputs.push_back(out_path("qr_ranks.csv"));

  json report;
  report["crossing"] = {{"checked", process.crossing.checked},
                        {"crossings", process.crossing.crossings},
                        {"fraction", process.crossing.fraction},
                        {"worst", process.crossing.worst}};
  json levels = json::array();
  for (const auto& f : process.fits) {
    levels.push_back({{"t", f.t},
                      {"objective", f.objective},
                      {"check_loss", f.check_loss},
                      {"normal_eq_inf", f.normal_eq_inf},
                      {"iterations", f.report.iterations}});
  }
  report["levels"] = std::move(levels);
  write_json_file(out_path("qr_report.json"), report);
  outputs.push_back(out_path("qr_report.json"));

  vqr::RunManifest manifest;
  manifest.command = "qr";
  manifest.args = args;
  manifest.inputs = {cfg.data};

  if (!cfg.compare.empty()) {
    const vqr::VqrFit vfit = vqr::load_fit(cfg.compare);
    const vqr::QrVqrComparison comp = vqr::compare_vqr_qr(vfit, process, data);
    vqr::write_csv(out_path("comparison.csv"), vqr::comparison_table(comp));
    outputs.push_back(out_path("comparison.csv"));
    manifest.inputs.push_back(cfg.compare);
    std::cout << "qr: comparison max |gap| " << comp.max_abs_gap << " (fitted values "
              << comp.max_fitted_gap << ")\n";
  }

  manifest.outputs = outputs;
  manifest.options = {{"y", cfg.y},           {"x", cfg.x},
                      {"weights", cfg.weights}, {"t_grid", cfg.t_levels},
                      {"tol", cfg.tol},       {"max_iter", cfg.max_iter},
                      {"out", cfg.out}};
  vqr::write_manifest((std::filesystem::path(cfg.out) / "manifest.json").string(), manifest);

  std::cout << "qr: " << cfg.t_levels << " levels, crossing fraction "
            << process.crossing.fraction << ", wrote " << cfg.out << "\n";
  return 0;
}

struct SimulateCmd {
  std::string model;
  std::string spec;
  long n = 1000;
  std::uint64_t seed = 1;
  std::string out = "sim.csv";
};

int cmd_simulate(const SimulateCmd& cfg, const std::vector<std::string>& args) {
  if (cfg.model != "normal") {
    throw vqr::CapabilityError("simulate: unknown model '" + cfg.model +
                               "' (available: normal)");
  }
  if (cfg.n < 1) throw vqr::ValidationError("simulate: --n must be positive");
  const vqr::NormalSpec spec = vqr::load_normal_spec(cfg.spec);
  const vqr::SimulatedSample sample =
      vqr::simulate_normal(spec, static_cast<int>(cfg.n), cfg.seed);

  vqr::Table table;
  const int d = sample.data.d();
  for (int r = 0; r < d; ++r) table.names.push_back("y" + std::to_string(r + 1));
  table.names.push_back("z");
  table.values.resize(sample.data.n(), d + 1);
  table.values.leftCols(d) = sample.data.Y;
  table.values.col(d) = sample.z;
  vqr::write_csv(cfg.out, table);

  vqr::RunManifest manifest;
  manifest.command = "simulate";
  manifest.args = args;
  manifest.inputs = {cfg.spec};
  manifest.outputs = {cfg.out};
  manifest.options = {{"model", cfg.model}, {"n", cfg.n}, {"seed", cfg.seed}, {"out", cfg.out}};
  vqr::write_manifest(vqr::manifest_path_for(cfg.out), manifest);

  std::cout << "simulate: wrote " << sample.data.n() << " rows to " << cfg.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional vector quantile models via optimal transport"};
  app.require_subcommand(1);

  FitCmd fit_cfg;
  CLI::App* fit = app.add_subcommand("fit", "Fit the coupling program and write a fit artifact");
  fit->add_option("--data", fit_cfg.data, "CSV with a header row")->required()->check(CLI::ExistingFile);
  fit->add_option("--y", fit_cfg.y, "comma-separated outcome columns")->required();
  fit->add_option("--x", fit_cfg.x, "comma-separated regressor terms (e.g. income,income^2,levels:region)");
  fit->add_option("--weights", fit_cfg.weights, "'uniform' or a weight column name");
  fit->add_option("--grid", fit_cfg.grid, "rank grid: '20x20', '99', or 'sampled:200'")->required();
  fit->add_option("--tol", fit_cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
  fit->add_option("--max-iter", fit_cfg.max_iter)->check(CLI::PositiveNumber);
  fit->add_option("--seed", fit_cfg.seed, "seed for sampled grids");
  fit->add_option("--out", fit_cfg.out, "output directory");
  fit->add_option("--dump-lp", fit_cfg.dump_lp, "also write the program in LP text format");

  SurfaceCmd surface_cfg;
  CLI::App* surface =
      app.add_subcommand("surface", "Quantile surface at a regressor point, as CSV");
  surface->add_option("--fit", surface_cfg.fit, "fit artifact")->required()->check(CLI::ExistingFile);
  surface->add_option("--x", surface_cfg.x,
                      "regressor values v2,v3,... or, with --x-quantile, feature terms");
  CLI::Option* sq = surface->add_option("--x-quantile", surface_cfg.x_quantile,
                                        "probe at this per-column quantile of --data");
  surface->add_option("--data", surface_cfg.data, "CSV used with --x-quantile")->check(CLI::ExistingFile);
  surface->add_option("--out", surface_cfg.out, "output CSV");

  RanksCmd ranks_cfg;
  CLI::App* ranks = app.add_subcommand("ranks", "Barycentric observation ranks, as CSV");
  ranks->add_option("--fit", ranks_cfg.fit, "fit artifact")->required()->check(CLI::ExistingFile);
  ranks->add_option("--out", ranks_cfg.out, "output CSV");

  DiagnoseCmd diagnose_cfg;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Monotonicity / cross-partial / uniformity report");
  diagnose->add_option("--fit", diagnose_cfg.fit, "fit artifact")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--x", diagnose_cfg.x,
                       "regressor values v2,v3,... or, with --x-quantile, feature terms");
  CLI::Option* dq = diagnose->add_option("--x-quantile", diagnose_cfg.x_quantile,
                                         "probe at this per-column quantile of --data");
  diagnose->add_option("--data", diagnose_cfg.data, "CSV used with --x-quantile")->check(CLI::ExistingFile);
  diagnose->add_option("--lattice", diagnose_cfg.lattice, "copula lattice size")->check(CLI::PositiveNumber);
  diagnose->add_option("--out", diagnose_cfg.out, "output JSON");

  QrCmd qr_cfg;
  CLI::App* qr = app.add_subcommand("qr", "Scalar quantile process over a level grid");
  qr->add_option("--data", qr_cfg.data, "CSV with a header row")->required()->check(CLI::ExistingFile);
  qr->add_option("--y", qr_cfg.y, "outcome column")->required();
  qr->add_option("--x", qr_cfg.x, "comma-separated regressor terms");
  qr->add_option("--weights", qr_cfg.weights, "'uniform' or a weight column name");
  qr->add_option("--t-grid", qr_cfg.t_levels, "number of midpoint levels")->check(CLI::PositiveNumber);
  qr->add_option("--tol", qr_cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
  qr->add_option("--max-iter", qr_cfg.max_iter)->check(CLI::PositiveNumber);
  qr->add_option("--compare", qr_cfg.compare, "fit artifact to compare against")->check(CLI::ExistingFile);
  qr->add_option("--out", qr_cfg.out, "output directory");

  SimulateCmd sim_cfg;
  CLI::App* simulate = app.add_subcommand("simulate", "Draw a dataset from a known model");
  simulate->add_option("model", sim_cfg.model, "model family (normal)")->required();
  simulate->add_option("--spec", sim_cfg.spec, "model spec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--n", sim_cfg.n, "sample size")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_cfg.seed, "RNG seed");
  simulate->add_option("--out", sim_cfg.out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  try {
    if (fit->parsed()) return cmd_fit(fit_cfg, args);
    if (surface->parsed()) {
      surface_cfg.have_quantile = sq->count() > 0;
      return cmd_surface(surface_cfg, args);
    }
    if (ranks->parsed()) return cmd_ranks(ranks_cfg, args);
    if (diagnose->parsed()) {
      diagnose_cfg.have_quantile = dq->count() > 0;
      return cmd_diagnose(diagnose_cfg, args);
    }
    if (qr->parsed()) return cmd_qr(qr_cfg, args);
    if (simulate->parsed()) return cmd_simulate(sim_cfg, args);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const vqr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const vqr::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const vqr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
