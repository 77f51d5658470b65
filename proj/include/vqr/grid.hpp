#pragma once

#include <cstdint>
#include <vector>
#include <Eigen/Dense>

namespace vqr {

/// Discretization of the reference rank distribution: m atoms in the open
/// unit cube (0,1)^d with positive weights mu summing to one.
///
/// Tensor grids keep their per-dimension counts in `shape` (dimension 1
/// varies fastest in the row ordering of U); sampled grids have an empty
/// `shape` and carry the seed they were drawn from.
struct RankGrid {
  Eigen::MatrixXd U;        ///< m x d atom coordinates, all inside (0,1)
  Eigen::VectorXd mu;       ///< m positive weights, sum = 1
  std::vector<int> shape;   ///< per-dimension counts (empty for sampled grids)
  std::uint64_t seed = 0;   ///< seed used for sampled grids (0 otherwise)

  int m() const { return static_cast<int>(U.rows()); }
  int d() const { return static_cast<int>(U.cols()); }
  bool is_tensor() const { return !shape.empty(); }

  /// Cell widths 1/shape[r] per dimension (tensor grids only).
  std::vector<double> spacing() const;

  /// Flat index of a tensor multi-index (0-based, dimension 1 fastest).
  int flat_index(const std::vector<int>& multi) const;

  /// Multi-index of a flat tensor index.
  std::vector<int> multi_index(int k) const;

  /// Throws ValidationError if the grid violates its invariants.
  void validate() const;
};

/// Uniform cell-centered tensor grid: along dimension r with m_r cells the
/// coordinates are (i + 0.5)/m_r for i = 0..m_r-1, each atom carrying weight
/// 1/prod(shape).
RankGrid tensor_grid(const std::vector<int>& shape);

/// m independent uniform draws from (0,1)^d with equal weights 1/m,
/// deterministic in the seed.
RankGrid sampled_grid(int m, int d, std::uint64_t seed);

/// Grid from user-supplied atoms (any reference distribution; no tensor
/// topology, so finite-difference coefficient recovery is unavailable).
/// Weights must be positive and sum to one.
RankGrid user_grid(const Eigen::MatrixXd& U, const Eigen::VectorXd& mu);

}  // namespace vqr
