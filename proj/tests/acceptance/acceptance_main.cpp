// Acceptance suite for the transport-based quantile regression engine.
//
// Each criterion prints exactly one [PASS]/[FAIL] line; the process exit
// code is the number of failed criteria.  Numerical thresholds are frozen
// here, in code, so a regression anywhere in the pipeline turns a line red
// rather than silently shifting a tolerance.
//
// Frozen Monte-Carlo calibration constants (reproducible with the
// vqr_devtool binary, which shares the model definitions in
// tools/model_zoo.hpp):
//
//   kRecoveryTau = 0.18
//     90th percentile across 10 replications (seeds 1000..1009) of the
//     sup-norm recovery error of per-atom conditional quantiles at
//     n = 4000 on the 15x15 gaussian-reference grid; measured 0.178487,
//     frozen with headroom at 0.18.
//     (vqr_devtool grid-accuracy --reps 10 --seed-base 1000)
//
//   kQrSamplingError = 0.24
//     Median across 10 replications (seeds 2000..2009) of the worst
//     decile/quartile fitted-value estimation error of the scalar QR path
//     at n = 2000, 99 levels, against the generating location-scale model;
//     measured 0.236046, frozen with headroom at 0.24.
//     (vqr_devtool qr-gap --reps 10 --seed-base 2000)
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "model_zoo.hpp"
#include "vqr/artifact.hpp"
#include "vqr/dataset.hpp"
#include "vqr/errors.hpp"
#include "vqr/fit.hpp"
#include "vqr/grid.hpp"
#include "vqr/hash.hpp"
#include "vqr/math.hpp"
#include "vqr/oracle.hpp"
#include "vqr/rng.hpp"
#include "vqr/scalar_qr.hpp"

namespace {

constexpr double kRecoveryTau = 0.18;
constexpr double kQrSamplingError = 0.24;

namespace fs = std::filesystem;

fs::path g_scratch;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return std::string(buffer);
}

// Run the CLI under test; returns its exit status (-1 if it did not exit
// normally).  Output is appended to a log in the scratch directory.
int run_cli(const std::string& args) {
  const std::string log = (g_scratch / "cli_log.txt").string();
  const std::string cmd = std::string(VQR_CLI_PATH) + " " + args + " >> " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string data_file(const std::string& name) {
  return (fs::path(VQR_DATA_DIR) / name).string();
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence on tiny programs.
Outcome criterion_brute_force() {
  const auto t0 = std::chrono::steady_clock::now();
  vqr::FitOptions options;
  options.tol = 1e-11;
  options.want_beta = false;

  double worst = 0.0;
  int count = 0;
  for (int rep = 0; rep < 10; ++rep) {
    for (int family = 0; family < 5; ++family) {
      const std::uint64_t seed = 100 + static_cast<std::uint64_t>(10 * family + rep);
      vqr::Rng rng(seed);
      Eigen::MatrixXd Y, X;
      vqr::RankGrid grid;
      switch (family) {
        case 0: {  // scalar outcomes, intercept only
          Y = rng.normal_vector(8);
          X = Eigen::MatrixXd::Ones(8, 1);
          grid = vqr::tensor_grid({8});
          break;
        }
        case 1: {  // scalar outcomes, binary regressor
          Y.resize(8, 1);
          X = Eigen::MatrixXd::Ones(8, 2);
          for (int i = 0; i < 8; ++i) {
            X(i, 1) = (i < 4) ? 0.0 : 1.0;
            Y(i, 0) = 0.5 * X(i, 1) + rng.normal();
          }
          grid = vqr::tensor_grid({8});
          break;
        }
        case 2: {  // bivariate outcomes, intercept only
          Y.resize(16, 2);
          X = Eigen::MatrixXd::Ones(16, 1);
          for (int i = 0; i < 16; ++i) {
            Y(i, 0) = rng.normal();
            Y(i, 1) = 0.3 * Y(i, 0) + 0.8 * rng.normal();
          }
          grid = vqr::tensor_grid({2, 2});
          break;
        }
        case 3: {  // bivariate outcomes, binary regressor
          Y.resize(7, 2);
          X = Eigen::MatrixXd::Ones(7, 2);
          for (int i = 0; i < 7; ++i) {
            X(i, 1) = (i < 3) ? 0.0 : 1.0;
            Y(i, 0) = X(i, 1) + rng.normal();
            Y(i, 1) = -X(i, 1) + rng.normal();
          }
          grid = vqr::tensor_grid({3, 3});
          break;
        }
        default: {  // scalar outcomes, continuous regressor, sampled grid
          Y.resize(10, 1);
          X = Eigen::MatrixXd::Ones(10, 2);
          for (int i = 0; i < 10; ++i) {
            X(i, 1) = 2.0 * rng.uniform01();
            Y(i, 0) = 1.0 + X(i, 1) + (1.0 + 0.2 * X(i, 1)) * rng.normal();
          }
          grid = vqr::sampled_grid(6, 1, seed);
          break;
        }
      }
      const vqr::Dataset data = vqr::make_dataset(Y, X);
      const double reference = vqr::brute_force_vqr(data, grid);
      const vqr::VqrFit fit = vqr::fit(data, grid, options);
      worst = std::max(worst, std::abs(fit.objective - reference));
      ++count;
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst <= 1e-9 && elapsed < 10.0;
  out.detail = fmt("max objective gap %.2e over %d programs (%.1fs, budget 10s)", worst, count,
                   elapsed);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Order-statistic exactness for the intercept-only scalar model.
Outcome criterion_order_statistics() {
  const auto t0 = std::chrono::steady_clock::now();
  vqr::Rng rng(7);
  const int n = 50;
  Eigen::VectorXd y = rng.normal_vector(n);
  const vqr::Dataset data = vqr::make_dataset(y, Eigen::MatrixXd::Ones(n, 1));

  vqr::FitOptions options;
  options.tol = 1e-10;
  const vqr::VqrFit fit = vqr::fit(data, vqr::tensor_grid({n}), options);

  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(fit.beta[static_cast<std::size_t>(k)](0, 0) - sorted[k]));
  }
  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst <= 1e-8 && elapsed < 5.0;
  out.detail = fmt("max |beta(u_k) - y_(k)| = %.2e at n=m=%d (%.1fs, budget 5s)", worst, n,
                   elapsed);
  return out;
}

// ---------------------------------------------------------------------------
// 3. Optimality certificates on a mid-size program.
Outcome criterion_certificates() {
  const auto t0 = std::chrono::steady_clock::now();
  const vqr::SimulatedSample sim =
      vqr::simulate_normal(vqr_models::diagonal_two_level_spec(), 500, 42);

  vqr::FitOptions options;
  options.tol = 1e-10;
  const vqr::VqrFit fit = vqr::fit(sim.data, vqr::tensor_grid({20, 20}), options);

  const double primal = std::max(fit.plan.marginal_error, fit.plan.mass_error);
  const double dual = fit.report.dual_inf;
  const double mean_indep = fit.plan.mean_independence_error;
  const double objective_shift = fit.grid.mu.dot(fit.grid.U * fit.normalization.y_center);
  const double objective_scaled =
      (fit.objective - objective_shift) / fit.normalization.y_scale;
  const double rel_gap = fit.report.gap / (1.0 + std::abs(objective_scaled));

  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = rel_gap <= 1e-7 && primal <= 1e-8 && dual <= 1e-8 && mean_indep <= 1e-8 &&
             elapsed < 300.0;
  out.detail = fmt(
      "rel gap %.2e, primal %.2e, dual %.2e, mean-indep %.2e at n=500 m=400 (%.1fs, budget "
      "300s)",
      rel_gap, primal, dual, mean_indep, elapsed);
  return out;
}

// ---------------------------------------------------------------------------
// 4. Conditional-normal recovery on the gaussian-reference grid.
Outcome criterion_normal_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  const vqr::NormalSpec spec = vqr_models::diagonal_two_level_spec();

  std::vector<double> small_errors, large_errors;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(rep);
    small_errors.push_back(vqr_models::recovery_error(spec, 4000, 15, seed));
    large_errors.push_back(vqr_models::recovery_error(spec, 8000, 15, seed));
  }
  const double p90 = vqr_models::percentile(small_errors, 0.9);
  const double median_small = vqr_models::percentile(small_errors, 0.5);
  const double median_large = vqr_models::percentile(large_errors, 0.5);

  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = p90 <= kRecoveryTau && median_large < median_small;
  out.detail = fmt(
      "p90 error %.4f <= tau %.2f at n=4000; median shrinks %.4f -> %.4f when n doubles "
      "(%.0fs)",
      p90, kRecoveryTau, median_small, median_large, elapsed);
  return out;
}

// ---------------------------------------------------------------------------
// 5. Saturated two-group fits factor into per-group problems.
Outcome criterion_factorization() {
  vqr::FitOptions options;
  options.tol = 1e-10;
  options.want_beta = false;

  double worst = 0.0;
  const int splits[3][2] = {{40, 16}, {50, 25}, {60, 27}};
  for (int trial = 0; trial < 3; ++trial) {
    const int n = splits[trial][0];
    const int n1 = splits[trial][1];
    vqr::Rng rng(300 + static_cast<std::uint64_t>(trial));
    Eigen::MatrixXd Y(n, 2), X(n, 2);
    for (int i = 0; i < n; ++i) {
      const bool second = i >= n1;
      const double a = rng.normal();
      const double b = rng.normal();
      X(i, 0) = 1.0;
      X(i, 1) = second ? 1.0 : 0.0;
      if (second) {
        Y(i, 0) = 1.0 + 0.5 * a;
        Y(i, 1) = 0.4 + 1.2 * (0.5 * a + 0.866 * b);
      } else {
        Y(i, 0) = 0.2 + 1.0 * a;
        Y(i, 1) = -0.3 + 0.7 * b;
      }
    }
    const vqr::RankGrid grid = vqr::tensor_grid({4, 4});
    const vqr::Dataset all = vqr::make_dataset(Y, X);
    const double obj_saturated = vqr::fit(all, grid, options).objective;

    const vqr::Dataset first =
        vqr::make_dataset(Y.topRows(n1), Eigen::MatrixXd::Ones(n1, 1));
    const vqr::Dataset rest =
        vqr::make_dataset(Y.bottomRows(n - n1), Eigen::MatrixXd::Ones(n - n1, 1));
    const double obj_groups =
        (static_cast<double>(n1) / n) * vqr::fit(first, grid, options).objective +
        (static_cast<double>(n - n1) / n) * vqr::fit(rest, grid, options).objective;
    worst = std::max(worst, std::abs(obj_saturated - obj_groups));
  }
  Outcome out;
  out.pass = worst <= 1e-8;
  out.detail = fmt("max |saturated - weighted group sum| = %.2e over 3 instances", worst);
  return out;
}

// ---------------------------------------------------------------------------
// Shared objects for criteria 6-8: one simulated location-scale sample with
// its scalar QR process and its transport fit on the matched level grid.
struct LinearModelBundle {
  vqr::Dataset data;
  vqr::QrProcess process;
  vqr::VqrFit fit;
};

std::optional<LinearModelBundle> g_linear_bundle;

const LinearModelBundle& linear_bundle() {
  if (!g_linear_bundle) {
    LinearModelBundle bundle;
    bundle.data = vqr_models::simulate_linear_model(2000, 2000, nullptr);
    bundle.process = vqr::qr_process(bundle.data, vqr::midpoint_t_grid(99));
    vqr::FitOptions options;
    options.tol = 1e-9;
    bundle.fit = vqr::fit(bundle.data, vqr::tensor_grid({99}), options);
    g_linear_bundle = std::move(bundle);
  }
  return *g_linear_bundle;
}

// 6. The two quantile-regression paths agree on correctly specified data.
Outcome criterion_qr_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const LinearModelBundle& bundle = linear_bundle();
  const double threshold = 3.0 * (1.0 / 99.0 + kQrSamplingError);

  std::vector<double> probes;
  for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    probes.push_back(vqr::sample_quantile(bundle.data.X.col(1), q));
  }

  double worst = 0.0;
  for (int dec = 1; dec <= 9; ++dec) {
    const int j = vqr_models::nearest_level_index(bundle.process.t_grid, dec / 10.0);
    for (const double x : probes) {
      Eigen::VectorXd xv(2);
      xv << 1.0, x;
      const double fitted_vqr =
          (bundle.fit.beta[static_cast<std::size_t>(j)].transpose() * xv)(0);
      const double fitted_qr = bundle.process.beta.row(j).dot(xv);
      worst = std::max(worst, std::abs(fitted_vqr - fitted_qr));
    }
  }

  // Companion report on the bundled example data: food vs income, the two
  // paths tabulated side by side plus a pooled median relative gap over
  // the five quartile curves.  Qualitative, so reported rather than gated.
  const vqr::Dataset engel = vqr::load_dataset(data_file("engel.csv"), {"food"},
                                               vqr::FeatureMap::parse("income"));
  const vqr::QrProcess engel_process = vqr::qr_process(engel, vqr::midpoint_t_grid(99));
  vqr::FitOptions options;
  options.tol = 1e-9;
  const vqr::VqrFit engel_fit = vqr::fit(engel, vqr::tensor_grid({99}), options);
  const vqr::QrVqrComparison comparison =
      vqr::compare_vqr_qr(engel_fit, engel_process, engel);
  const std::string table_path = (g_scratch / "engel_food_comparison.csv").string();
  vqr::write_csv(table_path, vqr::comparison_table(comparison));

  std::vector<double> rel_gaps;
  for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double x = vqr::sample_quantile(engel.X.col(1), q);
    Eigen::VectorXd xv(2);
    xv << 1.0, x;
    for (int j = 0; j < 99; ++j) {
      const double fitted_vqr =
          (engel_fit.beta[static_cast<std::size_t>(j)].transpose() * xv)(0);
      const double fitted_qr = engel_process.beta.row(j).dot(xv);
      rel_gaps.push_back(std::abs(fitted_vqr - fitted_qr) / (1.0 + std::abs(fitted_qr)));
    }
  }
  const double median_rel = vqr_models::percentile(rel_gaps, 0.5);

  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst <= threshold && fs::exists(table_path);
  out.detail = fmt(
      "max decile/quartile gap %.4f <= %.4f; example-data median relative gap %.4f, table "
      "written (%.0fs)",
      worst, threshold, median_rel, elapsed);
  return out;
}

// 7. Rank-score normal equations hold at every level.
Outcome criterion_normal_equations() {
  const LinearModelBundle& bundle = linear_bundle();
  double worst = 0.0;
  for (int dec = 1; dec <= 9; ++dec) {
    const vqr::QrFitAtT qr = vqr::kb_fit(bundle.data, dec / 10.0);
    worst = std::max(worst, qr.normal_eq_inf);
  }
  Outcome out;
  out.pass = worst <= 1e-8;
  out.detail = fmt("max normal-equation residual %.2e over t = 0.1..0.9", worst);
  return out;
}

// 8. Estimated ranks are uniform.
Outcome criterion_rank_uniformity() {
  const LinearModelBundle& bundle = linear_bundle();
  const double n = static_cast<double>(bundle.data.n());
  const double scalar_bound = 2.0 / 99.0 + 2.0 / std::sqrt(n);
  const double vector_bound = 1.0 / 99.0 + 2.0 / std::sqrt(n);

  const double scalar_ks = vqr::kolmogorov_uniform_distance(bundle.process.u_tilde);
  const Eigen::MatrixXd ranks = vqr::barycentric_ranks(bundle.fit);
  const double vector_ks = vqr::kolmogorov_uniform_distance(ranks.col(0));

  Outcome out;
  out.pass = scalar_ks <= scalar_bound && vector_ks <= vector_bound;
  out.detail = fmt("KS %.4f <= %.4f (level grid), %.4f <= %.4f (barycentric)", scalar_ks,
                   scalar_bound, vector_ks, vector_bound);
  return out;
}

// ---------------------------------------------------------------------------
// 9. Closed-form density transport identity.
Outcome criterion_density_identity() {
  vqr::Rng rng(99);
  std::vector<Eigen::VectorXd> sample;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd u(2);
    u << 0.01 + 0.98 * rng.uniform01(), 0.01 + 0.98 * rng.uniform01();
    sample.push_back(u);
  }

  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    vqr::NormalSpec spec;
    for (int level = 0; level < 2; ++level) {
      vqr::NormalLevel lvl;
      lvl.z = level;
      lvl.prob = 0.5;
      lvl.mu = Eigen::Vector2d(-2.0 + 4.0 * rng.uniform01(), -2.0 + 4.0 * rng.uniform01());
      lvl.omega = Eigen::Vector2d(0.3 + 2.2 * rng.uniform01(), 0.3 + 2.2 * rng.uniform01())
                      .asDiagonal();
      spec.levels.push_back(lvl);
    }
    spec.validate();
    for (int level = 0; level < 2; ++level) {
      worst = std::max(worst, vqr::monge_ampere_check(spec, level, sample));
    }
  }
  Outcome out;
  out.pass = worst <= 1e-8;
  out.detail = fmt("max identity residual %.2e over 5 specs x 2 levels x 100 points", worst);
  return out;
}

// ---------------------------------------------------------------------------
// 10. End-to-end run on the bundled example data.
Outcome criterion_example_pipeline() {
  const fs::path dir = g_scratch / "pipeline";
  fs::create_directories(dir);
  const std::string fit_dir = (dir / "fit").string();

  if (run_cli("fit --data " + data_file("engel.csv") +
              " --y food,housing --x income --grid 20x20 --out " + fit_dir) != 0) {
    return {false, "fit command failed"};
  }
  const std::string fit_json = fit_dir + "/fit.json";
  if (!fs::exists(fit_json) || !fs::exists(fit_dir + "/residuals.json") ||
      !fs::exists(fit_dir + "/manifest.json")) {
    return {false, "fit artifacts missing"};
  }

  const std::string surface_csv = (dir / "median_surface.csv").string();
  if (run_cli("surface --fit " + fit_json + " --x 883.99 --out " + surface_csv) != 0) {
    return {false, "surface command failed"};
  }
  const vqr::Table surface = vqr::read_csv(surface_csv);
  if (surface.values.rows() != 400 || surface.names.size() != 4) {
    return {false, "surface table has unexpected shape"};
  }

  const std::string diag_json = (dir / "diagnostics.json").string();
  if (run_cli("diagnose --fit " + fit_json + " --x 883.99 --out " + diag_json) != 0) {
    return {false, "diagnose command failed"};
  }
  std::ifstream in(diag_json);
  nlohmann::json diag;
  in >> diag;
  if (!diag.contains("cross_partial")) return {false, "cross-partial block missing"};
  const double fraction = diag["cross_partial"]["fraction"].get<double>();
  if (!(fraction >= 0.0 && fraction <= 1.0)) return {false, "negative fraction out of range"};

  Outcome out;
  out.pass = true;
  out.detail = fmt(
      "20x20 fit + surface at income 883.99 (400 rows) + sign map: negative fraction %.3f",
      fraction);
  return out;
}

// ---------------------------------------------------------------------------
// 11. Bytewise determinism of every command.
struct CommandCase {
  std::string name;
  std::string args;
  std::vector<std::string> artifacts;
};

Outcome criterion_determinism() {
  const fs::path dir = g_scratch / "determinism";
  fs::create_directories(dir);
  const std::string spec_path = (dir / "spec.json").string();
  vqr::save_normal_spec(spec_path, vqr_models::diagonal_two_level_spec());

  const std::string engel = data_file("engel.csv");
  const std::string fit2d = (dir / "fit2d").string();
  const std::string fit1d = (dir / "fit1d").string();
  const std::string sim_csv = (dir / "sim.csv").string();
  const std::string surface_csv = (dir / "surface.csv").string();
  const std::string ranks_csv = (dir / "ranks.csv").string();
  const std::string diag_json = (dir / "diag.json").string();
  const std::string qr_dir = (dir / "qr").string();

  const std::vector<CommandCase> cases = {
      {"simulate", "simulate normal --spec " + spec_path + " --n 400 --seed 7 --out " + sim_csv,
       {sim_csv, sim_csv + ".manifest.json"}},
      {"fit 2d",
       "fit --data " + engel + " --y food,housing --x income --grid 8x8 --out " + fit2d,
       {fit2d + "/fit.json", fit2d + "/residuals.json", fit2d + "/manifest.json"}},
      {"fit 1d", "fit --data " + engel + " --y food --x income --grid 33 --out " + fit1d,
       {fit1d + "/fit.json", fit1d + "/residuals.json", fit1d + "/manifest.json"}},
      {"surface", "surface --fit " + fit2d + "/fit.json --x 883.99 --out " + surface_csv,
       {surface_csv, surface_csv + ".manifest.json"}},
      {"ranks", "ranks --fit " + fit2d + "/fit.json --out " + ranks_csv,
       {ranks_csv, ranks_csv + ".manifest.json"}},
      {"diagnose", "diagnose --fit " + fit2d + "/fit.json --x 883.99 --out " + diag_json,
       {diag_json, diag_json + ".manifest.json"}},
      {"qr",
       "qr --data " + engel + " --y food --x income --t-grid 33 --compare " + fit1d +
           "/fit.json --out " + qr_dir,
       {qr_dir + "/qr_beta.csv", qr_dir + "/qr_ranks.csv", qr_dir + "/qr_report.json",
        qr_dir + "/comparison.csv", qr_dir + "/manifest.json"}},
  };

  int artifacts_checked = 0;
  for (const CommandCase& c : cases) {
    if (run_cli(c.args) != 0) return {false, c.name + ": first run failed"};
    std::vector<std::string> digests;
    for (const std::string& artifact : c.artifacts) {
      if (!fs::exists(artifact)) return {false, c.name + ": missing " + artifact};
      digests.push_back(vqr::sha256_file(artifact));
    }
    if (run_cli(c.args) != 0) return {false, c.name + ": second run failed"};
    for (std::size_t i = 0; i < c.artifacts.size(); ++i) {
      if (vqr::sha256_file(c.artifacts[i]) != digests[i]) {
        return {false, c.name + ": " + c.artifacts[i] + " changed between identical runs"};
      }
      ++artifacts_checked;
    }
  }
  Outcome out;
  out.pass = true;
  out.detail = fmt("%zu commands rerun, %d artifacts bytewise identical",
                   cases.size(), artifacts_checked);
  return out;
}

}  // namespace

int main() {
  g_scratch = fs::current_path() / "acceptance_scratch";
  std::error_code ec;
  fs::remove_all(g_scratch, ec);
  fs::create_directories(g_scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence on tiny programs", criterion_brute_force},
      {"order-statistic exactness", criterion_order_statistics},
      {"optimality certificates at scale", criterion_certificates},
      {"conditional-normal recovery", criterion_normal_recovery},
      {"saturated-design factorization", criterion_factorization},
      {"scalar QR agreement", criterion_qr_agreement},
      {"rank-score normal equations", criterion_normal_equations},
      {"rank uniformity", criterion_rank_uniformity},
      {"density transport identity", criterion_density_identity},
      {"example-dataset pipeline", criterion_example_pipeline},
      {"bytewise determinism", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %2zu. %s — %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
