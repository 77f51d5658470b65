#include "vqr/grid.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "vqr/errors.hpp"
#include "vqr/rng.hpp"

namespace vqr {

std::vector<double> RankGrid::spacing() const {
  if (!is_tensor()) throw CapabilityError("RankGrid::spacing: grid is not a tensor grid");
  std::vector<double> h(shape.size());
  for (std::size_t r = 0; r < shape.size(); ++r) h[r] = 1.0 / shape[r];
  return h;
}

int RankGrid::flat_index(const std::vector<int>& multi) const {
  if (!is_tensor()) throw CapabilityError("RankGrid::flat_index: grid is not a tensor grid");
  if (multi.size() != shape.size()) {
    throw ValidationError("RankGrid::flat_index: multi-index dimension mismatch");
  }
  int k = 0;
  int stride = 1;
  for (std::size_t r = 0; r < shape.size(); ++r) {
    if (multi[r] < 0 || multi[r] >= shape[r]) {
      throw ValidationError("RankGrid::flat_index: multi-index out of range");
    }
    k += multi[r] * stride;
    stride *= shape[r];
  }
  return k;
}

std::vector<int> RankGrid::multi_index(int k) const {
  if (!is_tensor()) throw CapabilityError("RankGrid::multi_index: grid is not a tensor grid");
  if (k < 0 || k >= m()) throw ValidationError("RankGrid::multi_index: index out of range");
  std::vector<int> multi(shape.size());
  for (std::size_t r = 0; r < shape.size(); ++r) {
    multi[r] = k % shape[r];
    k /= shape[r];
  }
  return multi;
}

void RankGrid::validate() const {
  const int mm = m();
  const int dd = d();
  if (mm < 1 || dd < 1) throw ValidationError("RankGrid: grid must have m >= 1 atoms and d >= 1 dimensions");
  if (mu.size() != mm) throw ValidationError("RankGrid: weight vector length differs from atom count");
  for (int k = 0; k < mm; ++k) {
    if (!(mu[k] > 0.0)) throw ValidationError("RankGrid: weights must be strictly positive");
    for (int r = 0; r < dd; ++r) {
      const double u = U(k, r);
      if (!std::isfinite(u)) throw ValidationError("RankGrid: atom coordinates must be finite");
      // The open-cube restriction applies to the canonical tensor grids; a
      // shape-free grid may carry user-supplied points from any reference
      // distribution (e.g. gaussian atoms).
      if (is_tensor() && !(u > 0.0 && u < 1.0)) {
        throw ValidationError("RankGrid: tensor grid coordinates must lie strictly inside (0,1)");
      }
    }
  }
  if (std::abs(mu.sum() - 1.0) > 1e-10) {
    throw ValidationError("RankGrid: weights must sum to one");
  }
  if (is_tensor()) {
    if (static_cast<int>(shape.size()) != dd) {
      throw ValidationError("RankGrid: tensor shape dimension differs from atom dimension");
    }
    long prod = 1;
    for (int s : shape) {
      if (s < 1) throw ValidationError("RankGrid: tensor shape entries must be >= 1");
      prod *= s;
    }
    if (prod != mm) throw ValidationError("RankGrid: tensor shape product differs from atom count");
  }
}

RankGrid tensor_grid(const std::vector<int>& shape) {
  if (shape.empty()) throw ValidationError("tensor_grid: shape must be non-empty");
  long m = 1;
  for (int s : shape) {
    if (s < 1) throw ValidationError("tensor_grid: each dimension count must be >= 1");
    m *= s;
    if (m > (1L << 26)) throw ResourceError("tensor_grid: grid has more than 2^26 atoms");
  }
  const int d = static_cast<int>(shape.size());

  RankGrid grid;
  grid.shape = shape;
  grid.U.resize(m, d);
  grid.mu = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  for (int k = 0; k < m; ++k) {
    int rem = k;
    for (int r = 0; r < d; ++r) {
      const int i = rem % shape[r];
      rem /= shape[r];
      grid.U(k, r) = (i + 0.5) / shape[r];
    }
  }
  grid.validate();
  return grid;
}

RankGrid user_grid(const Eigen::MatrixXd& U, const Eigen::VectorXd& mu) {
  RankGrid grid;
  grid.U = U;
  grid.mu = mu;
  grid.validate();
  return grid;
}

RankGrid sampled_grid(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ValidationError("sampled_grid: m and d must be >= 1");
  RankGrid grid;
  grid.seed = seed;
  grid.U.resize(m, d);
  grid.mu = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Rng rng(seed);
  for (int k = 0; k < m; ++k) {
    for (int r = 0; r < d; ++r) grid.U(k, r) = rng.uniform_open01();
  }
  grid.validate();
  return grid;
}

}  // namespace vqr
