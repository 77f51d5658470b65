// Simulation models and error measurements shared by the calibration
// utility and the acceptance suite.  The acceptance thresholds were frozen
// from Monte-Carlo runs of exactly these functions, so both binaries must
// keep using one definition.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vqr/dataset.hpp"
#include "vqr/fit.hpp"
#include "vqr/grid.hpp"
#include "vqr/math.hpp"
#include "vqr/oracle.hpp"
#include "vqr/rng.hpp"
#include "vqr/scalar_qr.hpp"

namespace vqr_models {

inline double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const Eigen::Map<const Eigen::VectorXd> view(values.data(),
                                               static_cast<long>(values.size()));
  return vqr::sample_quantile(view, q);
}

// Two-level conditional normal with diagonal covariances; the model the
// recovery calibration and its acceptance twin both draw from.
inline vqr::NormalSpec diagonal_two_level_spec() {
  vqr::NormalSpec spec;
  vqr::NormalLevel a;
  a.z = 0.0;
  a.prob = 0.5;
  a.mu = Eigen::Vector2d(0.0, 0.0);
  a.omega = Eigen::Vector2d(1.0, 0.5).asDiagonal();
  vqr::NormalLevel b;
  b.z = 1.0;
  b.prob = 0.5;
  b.mu = Eigen::Vector2d(1.0, -0.5);
  b.omega = Eigen::Vector2d(0.5, 1.5).asDiagonal();
  spec.levels = {a, b};
  return spec;
}

// Product grid of per-coordinate standard normal quantiles at cell
// centers: the discrete gaussian reference.  Equal weights.
inline vqr::RankGrid gaussian_reference_grid(int per_dim) {
  const int m = per_dim * per_dim;
  Eigen::MatrixXd U(m, 2);
  for (int j = 0; j < per_dim; ++j) {
    for (int i = 0; i < per_dim; ++i) {
      U(i + per_dim * j, 0) = vqr::std_normal_quantile((i + 0.5) / per_dim);
      U(i + per_dim * j, 1) = vqr::std_normal_quantile((j + 0.5) / per_dim);
    }
  }
  return vqr::user_grid(U, Eigen::VectorXd::Constant(m, 1.0 / m));
}

// Sup over interior grid points, levels, and outcome coordinates of the
// gap between fitted per-atom quantiles and the analytic transport map.
inline double recovery_error(const vqr::NormalSpec& spec, int n, int per_dim,
                             std::uint64_t seed) {
  const vqr::SimulatedSample sim = vqr::simulate_normal(spec, n, seed);
  const vqr::RankGrid grid = gaussian_reference_grid(per_dim);

  double worst = 0.0;
  for (int level = 0; level < spec.num_levels(); ++level) {
    std::vector<int> rows;
    for (int i = 0; i < sim.data.n(); ++i) {
      if (sim.level_index[i] == level) rows.push_back(i);
    }
    Eigen::MatrixXd Y(static_cast<long>(rows.size()), 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Y.row(static_cast<long>(r)) = sim.data.Y.row(rows[r]);
    }
    const vqr::Dataset group = vqr::make_dataset(Y, Eigen::MatrixXd::Ones(Y.rows(), 1));

    vqr::FitOptions options;
    options.tol = 1e-8;
    const vqr::VqrFit fit = vqr::fit(group, grid, options);

    for (int j = 1; j + 1 < per_dim; ++j) {
      for (int i = 1; i + 1 < per_dim; ++i) {
        const int k = i + per_dim * j;
        const Eigen::VectorXd truth =
            vqr::normal_quantile_gaussian_ref(spec, grid.U.row(k).transpose(), level);
        const double gap =
            (fit.beta[static_cast<std::size_t>(k)].row(0).transpose() - truth)
                .lpNorm<Eigen::Infinity>();
        worst = std::max(worst, gap);
      }
    }
  }
  return worst;
}

// Linear-in-rank location-scale data: y = 1 + 2 x + (1 + x/2) G(u) with
// x uniform on (0,2) and u the latent rank, so the conditional quantile
// function is linear in x at every rank.
inline vqr::Dataset simulate_linear_model(int n, std::uint64_t seed,
                                          Eigen::VectorXd* latent_u) {
  vqr::Rng rng(seed);
  Eigen::MatrixXd Y(n, 1), X(n, 2);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * rng.uniform01();
    u[i] = rng.uniform01();
    X(i, 0) = 1.0;
    X(i, 1) = x;
    Y(i, 0) = 1.0 + 2.0 * x + (1.0 + 0.5 * x) * vqr::std_normal_quantile(u[i]);
  }
  if (latent_u != nullptr) *latent_u = u;
  return vqr::make_dataset(Y, X);
}

inline double linear_model_truth(double t, double x) {
  return 1.0 + 2.0 * x + (1.0 + 0.5 * x) * vqr::std_normal_quantile(t);
}

// Index of the level grid entry closest to a target rank.
inline int nearest_level_index(const Eigen::VectorXd& t_grid, double target) {
  int best = 0;
  for (int j = 1; j < t_grid.size(); ++j) {
    if (std::abs(t_grid[j] - target) < std::abs(t_grid[best] - target)) best = j;
  }
  return best;
}

// Worst fitted-value estimation error of the scalar QR path against the
// generating model, over decile ranks and quartile regressor values.
inline double qr_sampling_error(int n, int t_count, std::uint64_t seed) {
  const vqr::Dataset data = simulate_linear_model(n, seed, nullptr);
  const Eigen::VectorXd t_grid = vqr::midpoint_t_grid(t_count);
  const vqr::QrProcess process = vqr::qr_process(data, t_grid);

  std::vector<double> probes;
  for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    probes.push_back(vqr::sample_quantile(data.X.col(1), q));
  }

  double worst = 0.0;
  for (int dec = 1; dec <= 9; ++dec) {
    const int j = nearest_level_index(t_grid, dec / 10.0);
    const double t = t_grid[j];
    for (const double x : probes) {
      const double fitted = process.beta(j, 0) + process.beta(j, 1) * x;
      worst = std::max(worst, std::abs(fitted - linear_model_truth(t, x)));
    }
  }
  return worst;
}

}  // namespace vqr_models
