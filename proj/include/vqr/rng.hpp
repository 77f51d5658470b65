#pragma once

#include <cstdint>
#include <Eigen/Dense>

namespace vqr {

/// Deterministic random number generator: xoshiro256++ seeded through
/// splitmix64.  The stream depends only on the seed, never on the platform
/// or standard-library internals, so every artifact derived from a seed is
/// reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Next raw 64-bit word.
  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0, 1) with 53-bit resolution.
  double uniform_open01();

  /// Uniform draw in the half-open interval [0, 1).
  double uniform01();

  /// Standard normal draw via the inverse-CDF transform of uniform_open01().
  double normal();

  /// Vector of independent standard normal draws.
  Eigen::VectorXd normal_vector(int n);

  /// Uniform integer in {0, 1, ..., n-1}; n must be positive.
  int uniform_int(int n);

 private:
  std::uint64_t s_[4];
};

}  // namespace vqr
