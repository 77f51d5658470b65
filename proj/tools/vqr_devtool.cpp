// Maintainer utilities: Monte-Carlo calibration runs behind the frozen
// acceptance thresholds, plus the deterministic generator for the bundled
// example dataset.  Not installed; kept for reproducibility.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "model_zoo.hpp"
#include "vqr/dataset.hpp"
#include "vqr/rng.hpp"

namespace {

int run_grid_accuracy(int reps, std::uint64_t seed_base) {
  const vqr::NormalSpec spec = vqr_models::diagonal_two_level_spec();
  std::vector<double> small_errors, large_errors;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const double e4 =
        vqr_models::recovery_error(spec, 4000, 15, seed_base + static_cast<std::uint64_t>(r));
    const double e8 =
        vqr_models::recovery_error(spec, 8000, 15, seed_base + static_cast<std::uint64_t>(r));
    const auto t1 = std::chrono::steady_clock::now();
    small_errors.push_back(e4);
    large_errors.push_back(e8);
    std::printf("rep %2d  seed %llu  err(n=4000) %.6f  err(n=8000) %.6f  [%.1fs]\n", r,
                static_cast<unsigned long long>(seed_base + static_cast<std::uint64_t>(r)), e4,
                e8, std::chrono::duration<double>(t1 - t0).count());
    std::fflush(stdout);
  }
  std::printf("n=4000: median %.6f  p90 %.6f\n", vqr_models::percentile(small_errors, 0.5),
              vqr_models::percentile(small_errors, 0.9));
  std::printf("n=8000: median %.6f  p90 %.6f\n", vqr_models::percentile(large_errors, 0.5),
              vqr_models::percentile(large_errors, 0.9));
  return 0;
}

int run_qr_gap(int reps, int n, int t_count, std::uint64_t seed_base) {
  std::vector<double> errors;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const double err =
        vqr_models::qr_sampling_error(n, t_count, seed_base + static_cast<std::uint64_t>(r));
    const auto t1 = std::chrono::steady_clock::now();
    errors.push_back(err);
    std::printf("rep %2d  seed %llu  max decile/quartile error %.6f  [%.1fs]\n", r,
                static_cast<unsigned long long>(seed_base + static_cast<std::uint64_t>(r)), err,
                std::chrono::duration<double>(t1 - t0).count());
    std::fflush(stdout);
  }
  std::printf("median %.6f  p90 %.6f\n", vqr_models::percentile(errors, 0.5),
              vqr_models::percentile(errors, 0.9));
  return 0;
}

// Deterministic synthetic household budget file in the classic Engel
// layout (income, food, housing).  Constructed, not collected: incomes
// follow a fixed log-spaced profile whose sample median is exactly
// 883.99, and the two expenditure shares fall with income, with
// negatively correlated heteroskedastic disturbances.
int run_make_engel(const std::string& path) {
  const int n = 235;
  vqr::Rng rng(8899);

  // Median at sorted position 117 (0-based) of 235 equals 883.99 exactly.
  std::vector<double> income(n);
  const double median_income = 883.99;
  for (int i = 0; i < n; ++i) {
    const double g = (i - 117) / 117.0;  // -1 .. 1, zero at the median slot
    income[i] = median_income * std::exp(1.05 * g + 0.20 * g * g);
  }
  income[117] = median_income;

  // Deterministic interleave so the file is not income-sorted.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = (static_cast<long long>(i) * 144 + 71) % n;

  vqr::Table table;
  table.names = {"income", "food", "housing"};
  table.values.resize(n, 3);
  for (int row = 0; row < n; ++row) {
    const double inc = income[order[row]];
    const double food_share = 0.62 - 0.105 * std::log(inc / median_income);
    const double housing_share = 0.24 - 0.030 * std::log(inc / median_income);
    const double spread = 0.035 * (0.6 + 0.4 * inc / median_income);
    const double shock = rng.normal();
    const double tilt = rng.normal();
    double food = inc * (food_share + spread * (0.8 * shock + 0.6 * tilt));
    double housing = inc * (housing_share - spread * (0.8 * shock - 0.3 * tilt));
    food = std::max(food, 0.05 * inc);
    housing = std::max(housing, 0.03 * inc);
    table.values(row, 0) = inc;
    table.values(row, 1) = food;
    table.values(row, 2) = housing;
  }
  vqr::write_csv(path, table);
  std::printf("wrote %d rows to %s\n", n, path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration and data-generation utilities"};
  app.require_subcommand(1);

  int reps = 10;
  std::uint64_t seed_base = 1000;
  auto* grid_cmd = app.add_subcommand("grid-accuracy",
                                      "Monte-Carlo recovery error of per-atom quantiles");
  grid_cmd->add_option("--reps", reps);
  grid_cmd->add_option("--seed-base", seed_base);

  int qr_reps = 10;
  int qr_n = 2000;
  int qr_t = 99;
  std::uint64_t qr_seed_base = 2000;
  auto* qr_cmd = app.add_subcommand("qr-gap",
                                    "Monte-Carlo scalar-QR fitted-value sampling error");
  qr_cmd->add_option("--reps", qr_reps);
  qr_cmd->add_option("--n", qr_n);
  qr_cmd->add_option("--t-grid", qr_t);
  qr_cmd->add_option("--seed-base", qr_seed_base);

  std::string engel_out = "data/engel.csv";
  auto* engel_cmd = app.add_subcommand("make-engel", "Regenerate the bundled example dataset");
  engel_cmd->add_option("--out", engel_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (grid_cmd->parsed()) return run_grid_accuracy(reps, seed_base);
    if (qr_cmd->parsed()) return run_qr_gap(qr_reps, qr_n, qr_t, qr_seed_base);
    if (engel_cmd->parsed()) return run_make_engel(engel_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
