#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "vqr/dataset.hpp"
#include "vqr/grid.hpp"
#include "vqr/lp.hpp"

namespace vqr {

// Optimal coupling between rank atoms and observations, plus how well its
// row/column sums and conditional-mean constraints are actually satisfied.
struct TransportPlan {
  Eigen::MatrixXd pi;  // m x n, entry (k, j) = mass shared by atom k and observation j
  Eigen::VectorXd nu;  // n, target column marginal (observation weights)
  double marginal_error = 0.0;        // max |column sum - nu_j|
  double mass_error = 0.0;            // max |row sum - mu_k|
  double mean_independence_error = 0.0;  // max |(pi * X)(k,l) - mu_k * xbar_l|
};

struct DualPotentials {
  Eigen::VectorXd psi;  // n, one potential per observation
  Eigen::MatrixXd b;    // m x p, row k = potential coefficients at rank atom k
};

// Residuals of the fitted program, in solver (standardized) units.
struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string message;
};

// Affine data transform applied before solving; duals are mapped back to
// original units, so downstream consumers never see these directly.
struct Normalization {
  Eigen::VectorXd y_center;  // d
  double y_scale = 1.0;      // single scalar so the coupling is preserved exactly
  Eigen::VectorXd x_center;  // p (entry 0 unused: intercept)
  Eigen::VectorXd x_scale;   // p (entry 0 == 1)
};

struct VqrFit {
  RankGrid grid;
  DualPotentials duals;          // original units, normalized so b(first atom) = 0
  std::vector<Eigen::MatrixXd> beta;  // m entries, p x d; beta[k](l, r) = d b_l / d u_r
  TransportPlan plan;
  SolveReport report;
  Normalization normalization;
  double objective = 0.0;  // optimal transport objective in original units
  bool has_beta = false;

  int m() const { return grid.m(); }
  int d() const { return grid.d(); }
  int p() const { return static_cast<int>(duals.b.cols()); }
};

struct FitOptions {
  double tol = 1e-9;
  int max_iter = 200;
  bool want_beta = true;
  bool verbose = false;
};

// Fits the quantile model: solves the coupling program on a standardized copy
// of the data, maps the dual potentials back to original units, and (on tensor
// grids) differentiates them into per-atom coefficient matrices.
VqrFit fit(const Dataset& data, const RankGrid& grid, const FitOptions& options = {});

// Finite-difference gradients of the potential coefficients over a tensor
// grid: central differences inside, one-sided at the faces.  Requires at
// least two atoms per grid dimension.
std::vector<Eigen::MatrixXd> recover_beta(const Eigen::MatrixXd& b, const RankGrid& grid);

// Q(u_k | x) for every grid atom: rows are atoms, columns response coordinates.
Eigen::MatrixXd evaluate_quantile(const VqrFit& fit, const Eigen::VectorXd& x);

// Multivariate ranks of the fitted observations: weighted barycenter of the
// rank atoms coupled to each observation.  n x d.
Eigen::MatrixXd barycentric_ranks(const VqrFit& fit);

struct MonotonicityReport {
  long checked = 0;
  long violations = 0;
  double worst = 0.0;     // most negative inner product found (0 if none)
  double fraction = 0.0;  // violations / checked
};

// Checks <u - u', Q(u|x) - Q(u'|x)> >= 0 over all atom pairs, the discrete
// monotonicity (cyclical-ness) property of a gradient-of-convex map.
MonotonicityReport monotonicity_report(const VqrFit& fit, const Eigen::VectorXd& x);

struct CrossPartialReport {
  Eigen::MatrixXd value;    // (m1-2) x (m2-2) mixed second differences, interior atoms
  long negative = 0;        // entries below -tolerance
  long total = 0;
  double min_value = 0.0;
  double tolerance = 0.0;
};

// Mixed second difference of the scalar potential phi(u) = b(u)' x on an
// interior-of-grid stencil; d == 2 tensor grids only.
CrossPartialReport cross_partial(const VqrFit& fit, const Eigen::VectorXd& x);

// Q(u_k | x1) - Q(u_k | x0) for every atom: the rank-specific effect of
// moving the regressors from x0 to x1.  m x d.
Eigen::MatrixXd quantile_treatment_effect(const VqrFit& fit,
                                          const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& x1);

struct CopulaReport {
  Eigen::MatrixXd copula;   // lattice x lattice empirical joint CDF of the two rank samples
  double max_marginal_dev_1 = 0.0;  // sup |empirical marginal CDF - identity| on the lattice
  double max_marginal_dev_2 = 0.0;
  int lattice = 0;
};

// Empirical copula of two scalar rank samples on a uniform lattice of
// evaluation points {i / lattice}.
CopulaReport empirical_copula(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                              int lattice);

}  // namespace vqr
