#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include <Eigen/Dense>

#include "vqr/dataset.hpp"
#include "vqr/grid.hpp"

namespace vqr {

/// Conditional normal model: Y | Z=z ~ N(mu(z), Omega(z)) over a finite set
/// of covariate levels, each with a sampling probability.
struct NormalLevel {
  double z = 0.0;
  double prob = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd omega;
};

struct NormalSpec {
  std::vector<NormalLevel> levels;

  int d() const { return levels.empty() ? 0 : static_cast<int>(levels[0].mu.size()); }
  int num_levels() const { return static_cast<int>(levels.size()); }

  /// Throws ValidationError unless every Omega is symmetric positive
  /// definite, probabilities are positive and sum to one, and dimensions
  /// agree across levels.
  void validate() const;

  /// Symmetric PSD square root of Omega at a level (eigendecomposition).
  Eigen::MatrixXd omega_sqrt(int level) const;
  /// Inverse symmetric square root.
  Eigen::MatrixXd omega_inv_sqrt(int level) const;
};

std::string normal_spec_to_json(const NormalSpec& spec);
NormalSpec normal_spec_from_json(const std::string& text);
NormalSpec load_normal_spec(const std::string& path);
void save_normal_spec(const std::string& path, const NormalSpec& spec);

/// Simulation output: the dataset (X = intercept + indicators of levels
/// 2..L, spanning the saturated design) plus the generating variables.
struct SimulatedSample {
  Dataset data;
  Eigen::VectorXd z;             ///< level value per observation
  std::vector<int> level_index;  ///< level index per observation
  Eigen::MatrixXd latent;        ///< n x d latent standard normal draws
};

SimulatedSample simulate_normal(const NormalSpec& spec, int n, std::uint64_t seed);

/// Analytic conditional quantile at a cube rank u in (0,1)^d:
/// Q(u,z) = mu(z) + Omega^{1/2}(z) N(u) with the scalar standard normal
/// quantile N applied per coordinate.
Eigen::VectorXd normal_quantile(const NormalSpec& spec, const Eigen::VectorXd& u, int level);

/// Analytic conditional quantile in the native gaussian reference:
/// Q(u,z) = mu(z) + Omega^{1/2}(z) u for a gaussian rank u in R^d.
Eigen::VectorXd normal_quantile_gaussian_ref(const NormalSpec& spec, const Eigen::VectorXd& u,
                                             int level);

/// Analytic inverse (vector rank in the cube): coordinatewise standard
/// normal CDF of Omega^{-1/2}(z)(y - mu(z)).
Eigen::VectorXd normal_rank(const NormalSpec& spec, const Eigen::VectorXd& y, int level);

/// Max over sample points of |f_U(u) - f_{Y|Z}(Q(u,z),z) det D_u Q(u,z)|,
/// all pieces in closed form.  The identity is exact; the residual is
/// floating-point noise only.
double monge_ampere_check(const NormalSpec& spec, int level,
                          const std::vector<Eigen::VectorXd>& sample_u);

/// Exhaustive permutation oracle for the square uniform-weight transport
/// problem (n = m <= 8): maximizes sum_k u_k' y_{sigma(k)} / n.
struct TransportOracle {
  Eigen::MatrixXd pi;                       ///< optimal plan (m x n)
  double objective = 0.0;
  std::vector<std::vector<int>> ties;       ///< all optimal assignments (grid -> obs)
};

TransportOracle brute_force_transport(const Eigen::MatrixXd& U, const Eigen::MatrixXd& Y);

/// Independent re-solve of the discretized transport program by a dense
/// two-phase tableau simplex (Bland's rule).  Shares no code with the main
/// solver.  Requires m*n <= 64.
double brute_force_vqr(const Dataset& data, const RankGrid& grid);

/// Dense equality-form simplex used by brute_force_vqr; exposed for direct
/// cross-checks.  Maximizes c'x subject to A x = b, x >= 0.
struct DenseLpResult {
  double objective = 0.0;
  Eigen::VectorXd x;
  bool optimal = false;
};

DenseLpResult dense_simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& c);

}  // namespace vqr
