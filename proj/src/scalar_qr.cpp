#include "vqr/scalar_qr.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vqr/errors.hpp"
#include "vqr/lp.hpp"
#include "vqr/math.hpp"

namespace vqr {

double check_loss(double z, double t) { return z >= 0.0 ? t * z : (t - 1.0) * z; }

namespace {

int thread_budget(int jobs) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("VQR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 256) budget = static_cast<int>(v);
  }
  return std::min(budget, jobs);
}

}  // namespace

QrFitAtT kb_fit(const Dataset& data, double t, const QrOptions& options) {
  data.validate();
  if (data.d() != 1) {
    throw CapabilityError("kb_fit: scalar fit needs a one-dimensional response");
  }
  if (!(t > 0.0 && t < 1.0)) {
    throw ValidationError("kb_fit: quantile level must lie strictly inside (0, 1)");
  }
  const int n = data.n();
  const int p = data.p();

  // Standardized working copy; coefficients are mapped back at the end.
  Eigen::VectorXd y = data.Y.col(0);
  const double y_center = weighted_mean(y, data.nu);
  double y_scale = weighted_std(y, data.nu);
  if (!(y_scale > 1e-12)) y_scale = 1.0;
  y = (y.array() - y_center) / y_scale;

  Eigen::MatrixXd X = data.X;
  Eigen::VectorXd x_center = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd x_scale = Eigen::VectorXd::Ones(p);
  for (int l = 1; l < p; ++l) {
    const double c = weighted_mean(X.col(l), data.nu);
    double s = weighted_std(X.col(l), data.nu);
    if (!(s > 1e-12)) s = 1.0;
    x_center[l] = c;
    x_scale[l] = s;
    X.col(l) = (X.col(l).array() - c) / s;
  }

  // The level-t coefficients are identified only if the weighted design has
  // full column rank.
  const Eigen::MatrixXd weighted = data.nu.array().sqrt().matrix().asDiagonal() * X;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted);
  if (qr.rank() < p) {
    throw ValidationError("kb_fit: weighted design matrix is rank deficient");
  }

  // Rank-score program over (a, s): columns 0..n-1 hold a, n..2n-1 hold s.
  LpProblem problem;
  problem.name = "qr";
  problem.meta.n = n;
  problem.meta.m = 0;
  problem.meta.p = p;
  problem.meta.d = 1;
  problem.A.resize(p + n, 2 * n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * (p + 2));
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < p; ++l) {
        const double v = data.nu[i] * X(i, l);
        if (v != 0.0) trips.emplace_back(l, i, v);
      }
      trips.emplace_back(p + i, i, 1.0);
      trips.emplace_back(p + i, n + i, 1.0);
    }
    problem.A.setFromTriplets(trips.begin(), trips.end());
    problem.A.makeCompressed();
  }
  problem.c = Eigen::VectorXd::Zero(2 * n);
  problem.c.head(n) = data.nu.cwiseProduct(y);
  problem.rhs.resize(p + n);
  problem.rhs.head(p) = (1.0 - t) * (X.transpose() * data.nu);
  problem.rhs.tail(n).setOnes();
  problem.x0.resize(2 * n);
  problem.x0.head(n).setConstant(1.0 - t);
  problem.x0.tail(n).setConstant(t);

  SolveOptions sopts;
  sopts.tol = options.tol;
  sopts.max_iter = options.max_iter;
  sopts.verbose = options.verbose;
  const LpSolution sol = solve(problem, sopts);
  if (sol.status != SolveStatus::optimal) {
    throw SolverError("kb_fit: rank-score program did not reach certified optimality (" +
                      sol.message + ")");
  }

  QrFitAtT out;
  out.t = t;
  out.report.status = sol.status;
  out.report.primal_inf = sol.primal_inf;
  out.report.dual_inf = sol.dual_inf;
  out.report.gap = sol.gap;
  out.report.iterations = sol.iterations;
  out.report.message = sol.message;

  // First block of row multipliers = standardized coefficients; undo the
  // centering/scaling exactly.
  const Eigen::VectorXd beta_std = sol.y.head(p);
  out.beta.resize(p);
  double b0 = beta_std[0];
  for (int l = 1; l < p; ++l) b0 -= x_center[l] * beta_std[l] / x_scale[l];
  out.beta[0] = y_scale * b0 + y_center;
  for (int l = 1; l < p; ++l) out.beta[l] = y_scale * beta_std[l] / x_scale[l];

  out.a = sol.x.head(n).cwiseMax(0.0).cwiseMin(1.0);
  out.objective = data.nu.dot(data.Y.col(0).cwiseProduct(out.a));
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    loss += data.nu[i] * check_loss(data.Y(i, 0) - data.X.row(i).dot(out.beta), t);
  }
  out.check_loss = loss;
  out.normal_eq_inf = (data.X.transpose() * data.nu.cwiseProduct(out.a) -
                       (1.0 - t) * data.x_bar())
                          .cwiseAbs()
                          .maxCoeff();
  return out;
}

Eigen::VectorXd midpoint_t_grid(int num_levels) {
  if (num_levels < 1) throw ValidationError("midpoint_t_grid: need at least one level");
  Eigen::VectorXd t(num_levels);
  for (int j = 0; j < num_levels; ++j) t[j] = (j + 0.5) / num_levels;
  return t;
}

QrProcess qr_process(const Dataset& data, const Eigen::VectorXd& t_grid,
                     const QrOptions& options) {
  const int num_levels = static_cast<int>(t_grid.size());
  if (num_levels < 1) throw ValidationError("qr_process: empty level grid");
  for (int j = 0; j < num_levels; ++j) {
    if (!(t_grid[j] > 0.0 && t_grid[j] < 1.0)) {
      throw ValidationError("qr_process: levels must lie strictly inside (0, 1)");
    }
    if (j > 0 && !(t_grid[j] > t_grid[j - 1])) {
      throw ValidationError("qr_process: levels must be strictly increasing");
    }
  }
  data.validate();
  if (data.d() != 1) {
    throw CapabilityError("qr_process: scalar fit needs a one-dimensional response");
  }

  QrProcess out;
  out.t_grid = t_grid;
  out.fits.resize(num_levels);

  // Work queue over level indices; every slot is written exactly once, so the
  // result does not depend on the number of workers.
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  const auto run = [&]() {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= num_levels) return;
      try {
        out.fits[j] = kb_fit(data, t_grid[j], options);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const int workers = thread_budget(num_levels);
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const int n = data.n();
  const int p = data.p();
  out.beta.resize(num_levels, p);
  out.a.resize(n, num_levels);
  for (int j = 0; j < num_levels; ++j) {
    out.beta.row(j) = out.fits[j].beta.transpose();
    out.a.col(j) = out.fits[j].a;
  }

  // Scalar ranks: integrate a_i(t) over (0, 1) by the midpoint rule, with
  // cell edges halfway between neighbouring levels and padded to 0 and 1.
  Eigen::VectorXd widths(num_levels);
  double prev_edge = 0.0;
  for (int j = 0; j < num_levels; ++j) {
    const double edge = j + 1 < num_levels ? 0.5 * (t_grid[j] + t_grid[j + 1]) : 1.0;
    widths[j] = edge - prev_edge;
    prev_edge = edge;
  }
  out.u_tilde = out.a * widths;

  // Crossing scan: fitted values at the observed regressors should not fall
  // as the level rises.
  const Eigen::MatrixXd fitted = data.X * out.beta.transpose();  // n x T
  const double tol = 1e-8 * (1.0 + fitted.cwiseAbs().maxCoeff());
  for (int j = 0; j + 1 < num_levels; ++j) {
    for (int i = 0; i < n; ++i) {
      const double inc = fitted(i, j + 1) - fitted(i, j);
      ++out.crossing.checked;
      if (inc < -tol) {
        ++out.crossing.crossings;
        out.crossing.worst = std::min(out.crossing.worst, inc);
      }
    }
  }
  out.crossing.fraction =
      out.crossing.checked > 0
          ? static_cast<double>(out.crossing.crossings) / out.crossing.checked
          : 0.0;
  return out;
}

QrVqrComparison compare_vqr_qr(const VqrFit& vfit, const QrProcess& process,
                               const Dataset& data) {
  if (vfit.d() != 1) {
    throw CapabilityError("compare_vqr_qr: the grid fit must have a one-dimensional response");
  }
  if (!vfit.has_beta) {
    throw StateError("compare_vqr_qr: fit carries no coefficients (want_beta was off)");
  }
  const int p = vfit.p();
  if (static_cast<int>(process.beta.cols()) != p || data.p() != p) {
    throw ValidationError("compare_vqr_qr: coefficient dimensions differ");
  }
  const int num_levels = static_cast<int>(process.t_grid.size());

  QrVqrComparison comp;
  comp.t = process.t_grid;
  comp.beta_qr = process.beta;
  comp.beta_vqr.resize(num_levels, p);
  for (int j = 0; j < num_levels; ++j) {
    int best = 0;
    double best_gap = std::abs(vfit.grid.U(0, 0) - process.t_grid[j]);
    for (int k = 1; k < vfit.m(); ++k) {
      const double g = std::abs(vfit.grid.U(k, 0) - process.t_grid[j]);
      if (g < best_gap) {
        best_gap = g;
        best = k;
      }
    }
    comp.beta_vqr.row(j) = vfit.beta[static_cast<std::size_t>(best)].col(0).transpose();
  }

  const Eigen::MatrixXd gap = (comp.beta_qr - comp.beta_vqr).cwiseAbs();
  comp.max_abs_gap = gap.maxCoeff();
  comp.max_rel_gap = (gap.array() / (1.0 + comp.beta_qr.array().abs())).maxCoeff();

  // Fitted-value agreement at probe regressors: the non-intercept columns set
  // jointly to their sample quantiles.
  for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    Eigen::VectorXd x(p);
    x[0] = 1.0;
    for (int l = 1; l < p; ++l) x[l] = sample_quantile(data.X.col(l), q);
    const Eigen::VectorXd through_qr = comp.beta_qr * x;
    const Eigen::VectorXd through_vqr = comp.beta_vqr * x;
    comp.max_fitted_gap =
        std::max(comp.max_fitted_gap, (through_qr - through_vqr).cwiseAbs().maxCoeff());
  }
  return comp;
}

Table comparison_table(const QrVqrComparison& comparison) {
  const int num_levels = static_cast<int>(comparison.t.size());
  const int p = static_cast<int>(comparison.beta_qr.cols());
  Table table;
  table.names = {"t", "coefficient", "beta_qr", "beta_vqr", "abs_gap", "rel_gap"};
  table.values.resize(static_cast<long>(num_levels) * p, 6);
  long row = 0;
  for (int j = 0; j < num_levels; ++j) {
    for (int l = 0; l < p; ++l, ++row) {
      const double bq = comparison.beta_qr(j, l);
      const double bv = comparison.beta_vqr(j, l);
      table.values(row, 0) = comparison.t[j];
      table.values(row, 1) = l;
      table.values(row, 2) = bq;
      table.values(row, 3) = bv;
      table.values(row, 4) = std::abs(bq - bv);
      table.values(row, 5) = std::abs(bq - bv) / (1.0 + std::abs(bq));
    }
  }
  return table;
}

}  // namespace vqr
