#pragma once

#include <Eigen/Dense>

#include <vector>

#include "vqr/dataset.hpp"
#include "vqr/fit.hpp"

namespace vqr {

// One scalar quantile regression, solved through the rank-score program
//   max sum_i nu_i y_i a_i   s.t.  X' diag(nu) a = (1 - t) xbar,  a + s = 1,
//   a, s >= 0,
// whose row multipliers on the first block are exactly the check-loss
// coefficients beta_t.
struct QrFitAtT {
  double t = 0.5;
  Eigen::VectorXd beta;     // p, original units
  Eigen::VectorXd a;        // n rank scores in [0, 1]
  double objective = 0.0;   // sum_i nu_i y_i a_i, original units
  double check_loss = 0.0;  // sum_i nu_i rho_t(y_i - x_i' beta), original units
  double normal_eq_inf = 0.0;  // |X' diag(nu) a - (1 - t) xbar|_inf, original units
  SolveReport report;
};

struct QrOptions {
  double tol = 1e-9;
  int max_iter = 200;
  bool verbose = false;
};

// t z+ + (1 - t) z-.
double check_loss(double z, double t);

// Fit one quantile level t in (0, 1).  Scalar response only; the weighted
// design must have full column rank.
QrFitAtT kb_fit(const Dataset& data, double t, const QrOptions& options = {});

struct QrCrossingReport {
  long checked = 0;     // fitted-value comparisons between consecutive levels
  long crossings = 0;   // comparisons where the higher level fits strictly lower
  double worst = 0.0;   // most negative fitted-value increment (0 if none)
  double fraction = 0.0;
};

// The whole quantile process on a grid of levels.
struct QrProcess {
  Eigen::VectorXd t_grid;      // T strictly increasing levels in (0, 1)
  std::vector<QrFitAtT> fits;  // T entries
  Eigen::MatrixXd beta;        // T x p
  Eigen::MatrixXd a;           // n x T rank scores
  Eigen::VectorXd u_tilde;     // n scalar ranks: integral of a_i(t) dt over (0, 1)
  QrCrossingReport crossing;
};

// Midpoint levels (j + 0.5) / T for j = 0..T-1.
Eigen::VectorXd midpoint_t_grid(int num_levels);

// Fits every level of `t_grid` (parallel across levels; results are
// aggregated by index, so the output is independent of thread count, which
// is taken from the VQR_THREADS environment variable when set).
QrProcess qr_process(const Dataset& data, const Eigen::VectorXd& t_grid,
                     const QrOptions& options = {});

// Scalar-lane comparison: for each level t the multivariate fit's coefficient
// vector at the rank atom nearest to t, against the scalar fit at t.
struct QrVqrComparison {
  Eigen::VectorXd t;            // T levels
  Eigen::MatrixXd beta_qr;      // T x p
  Eigen::MatrixXd beta_vqr;     // T x p
  double max_abs_gap = 0.0;     // over all levels and coefficients
  double max_rel_gap = 0.0;     // abs gap / (1 + |beta_qr|)
  double max_fitted_gap = 0.0;  // |x'(beta_qr - beta_vqr)| over probe regressors
};

QrVqrComparison compare_vqr_qr(const VqrFit& vfit, const QrProcess& process,
                               const Dataset& data);

// Long-format table of the comparison: t, coefficient, beta_qr, beta_vqr,
// abs_gap, rel_gap.
Table comparison_table(const QrVqrComparison& comparison);

}  // namespace vqr
