#include "vqr/fit.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "vqr/errors.hpp"
#include "vqr/math.hpp"

namespace vqr {

namespace {

// Center/scale in place.  Y gets per-column centers but one shared scale:
// scaling response coordinates unevenly would distort the transport geometry,
// while a common scalar factor leaves the optimal coupling untouched.
Normalization standardize(Dataset& data) {
  const int d = data.d();
  const int p = data.p();

  Normalization norm;
  norm.y_center.resize(d);
  norm.x_center = Eigen::VectorXd::Zero(p);
  norm.x_scale = Eigen::VectorXd::Ones(p);

  double spread = 0.0;
  for (int r = 0; r < d; ++r) {
    norm.y_center[r] = weighted_mean(data.Y.col(r), data.nu);
    spread = std::max(spread, weighted_std(data.Y.col(r), data.nu));
  }
  norm.y_scale = spread > 1e-12 ? spread : 1.0;
  for (int r = 0; r < d; ++r) {
    data.Y.col(r) = (data.Y.col(r).array() - norm.y_center[r]) / norm.y_scale;
  }

  for (int l = 1; l < p; ++l) {
    const double c = weighted_mean(data.X.col(l), data.nu);
    double s = weighted_std(data.X.col(l), data.nu);
    if (!(s > 1e-12)) s = 1.0;  // constant column: center only
    norm.x_center[l] = c;
    norm.x_scale[l] = s;
    data.X.col(l) = (data.X.col(l).array() - c) / s;
  }
  return norm;
}

// Map row multipliers of the standardized program back to original units.
// With y = (y_orig - c_y)/s and x_l = (x_orig_l - c_l)/s_l the pair
//   psi = s * psi_std,   b = s * R' b_std + (u' c_y) e_1
// satisfies the original-unit inequalities exactly, where R is the regressor
// transform (row 1 = e_1', row l = (e_l - c_l e_1)'/s_l).
DualPotentials unstandardize_duals(const Eigen::VectorXd& psi_std,
                                   const Eigen::MatrixXd& b_std,
                                   const RankGrid& grid, const Normalization& norm) {
  const int m = static_cast<int>(b_std.rows());
  const int p = static_cast<int>(b_std.cols());

  DualPotentials duals;
  duals.psi = norm.y_scale * psi_std;
  duals.b.resize(m, p);
  for (int k = 0; k < m; ++k) {
    double b0 = b_std(k, 0);
    for (int l = 1; l < p; ++l) {
      b0 -= norm.x_center[l] * b_std(k, l) / norm.x_scale[l];
    }
    duals.b(k, 0) = norm.y_scale * b0 + grid.U.row(k).dot(norm.y_center);
    for (int l = 1; l < p; ++l) {
      duals.b(k, l) = norm.y_scale * b_std(k, l) / norm.x_scale[l];
    }
  }
  return duals;
}

}  // namespace

VqrFit fit(const Dataset& data, const RankGrid& grid, const FitOptions& options) {
  data.validate();
  grid.validate();
  if (grid.d() != data.d()) {
    throw ValidationError("fit: grid dimension " + std::to_string(grid.d()) +
                          " does not match response dimension " + std::to_string(data.d()));
  }

  const int n = data.n();
  const int m = grid.m();
  const int p = data.p();

  Dataset work = data;
  const Normalization norm = standardize(work);

  LpProblem problem = assemble_primal(work, grid);
  SolveOptions sopts;
  sopts.tol = options.tol;
  sopts.max_iter = options.max_iter;
  sopts.verbose = options.verbose;
  const LpSolution sol = solve(problem, sopts);
  if (sol.status != SolveStatus::optimal) {
    throw SolverError("fit: coupling program did not reach certified optimality (" +
                      sol.message + ")");
  }

  VqrFit out;
  out.grid = grid;
  out.normalization = norm;
  out.report.status = sol.status;
  out.report.primal_inf = sol.primal_inf;
  out.report.dual_inf = sol.dual_inf;
  out.report.gap = sol.gap;
  out.report.iterations = sol.iterations;
  out.report.message = sol.message;

  // Row multipliers -> potentials (standardized units first).
  const Eigen::VectorXd psi_std = sol.y.head(n);
  Eigen::MatrixXd b_std(m, p);
  for (int l = 0; l < p; ++l) {
    b_std.col(l) = sol.y.segment(n + static_cast<long>(m) * l, m);
  }
  out.duals = unstandardize_duals(psi_std, b_std, grid, norm);

  // Pin down the additive dual degeneracy: force b at the first atom to zero,
  // compensating in psi so psi_j + b_k' x_j is unchanged for every pair.
  const Eigen::RowVectorXd offset = out.duals.b.row(0);
  out.duals.b.rowwise() -= offset;
  out.duals.psi += data.X * offset.transpose();

  // Coupling, reshaped from the vectorized primal (variable (k, j) at k + m*j),
  // with constraint residuals re-measured against the original-unit data.
  out.plan.pi.resize(m, n);
  for (int j = 0; j < n; ++j) {
    out.plan.pi.col(j) = sol.x.segment(static_cast<long>(m) * j, m);
  }
  out.plan.nu = data.nu;
  out.plan.marginal_error =
      (out.plan.pi.colwise().sum().transpose() - data.nu).cwiseAbs().maxCoeff();
  out.plan.mass_error = (out.plan.pi.rowwise().sum() - grid.mu).cwiseAbs().maxCoeff();
  out.plan.mean_independence_error =
      (out.plan.pi * data.X - grid.mu * data.x_bar().transpose()).cwiseAbs().maxCoeff();

  // Transport objective directly from the plan, in original units.
  out.objective = (out.plan.pi.array() * (grid.U * data.Y.transpose()).array()).sum();

  if (options.want_beta) {
    if (p == 1) {
      // No regressors beyond the intercept: the conditional barycenter of each
      // atom's coupled mass is the quantile map itself, with no differencing
      // error.  On matched uniform weights this reproduces order statistics.
      out.beta.reserve(m);
      for (int k = 0; k < m; ++k) {
        const double mass = out.plan.pi.row(k).sum();
        if (!(mass > 0.0)) {
          throw SolverError("fit: atom " + std::to_string(k) +
                            " received no transport mass");
        }
        Eigen::MatrixXd bk(1, data.d());
        bk.row(0) = (out.plan.pi.row(k) * data.Y) / mass;
        out.beta.push_back(std::move(bk));
      }
      out.has_beta = true;
    } else if (!grid.is_tensor()) {
      throw CapabilityError(
          "fit: coefficient recovery differentiates the potentials over a tensor "
          "rank grid; use a tensor grid or pass want_beta = false");
    } else {
      out.beta = recover_beta(out.duals.b, grid);
      out.has_beta = true;
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> recover_beta(const Eigen::MatrixXd& b, const RankGrid& grid) {
  if (!grid.is_tensor()) {
    throw CapabilityError("recover_beta: finite differences need a tensor rank grid");
  }
  const int m = grid.m();
  const int d = grid.d();
  const int p = static_cast<int>(b.cols());
  if (static_cast<int>(b.rows()) != m) {
    throw ValidationError("recover_beta: potential rows do not match grid atoms");
  }
  for (int r = 0; r < d; ++r) {
    if (grid.shape[r] < 2) {
      throw CapabilityError(
          "recover_beta: need at least two atoms per grid dimension to difference");
    }
  }

  const std::vector<double> h = grid.spacing();
  std::vector<Eigen::MatrixXd> beta(m, Eigen::MatrixXd::Zero(p, d));
  for (int k = 0; k < m; ++k) {
    const std::vector<int> mi = grid.multi_index(k);
    for (int r = 0; r < d; ++r) {
      std::vector<int> hi = mi;
      std::vector<int> lo = mi;
      double denom = 2.0 * h[r];
      if (mi[r] == 0) {
        hi[r] = 1;
        denom = h[r];
      } else if (mi[r] == grid.shape[r] - 1) {
        lo[r] = mi[r] - 1;
        denom = h[r];
      } else {
        hi[r] = mi[r] + 1;
        lo[r] = mi[r] - 1;
      }
      beta[k].col(r) =
          (b.row(grid.flat_index(hi)) - b.row(grid.flat_index(lo))).transpose() / denom;
    }
  }
  return beta;
}

Eigen::MatrixXd evaluate_quantile(const VqrFit& fit, const Eigen::VectorXd& x) {
  if (!fit.has_beta) {
    throw StateError("evaluate_quantile: fit carries no coefficients (want_beta was off)");
  }
  if (static_cast<int>(x.size()) != fit.p()) {
    throw ValidationError("evaluate_quantile: regressor vector has wrong length");
  }
  if (x[0] != 1.0) {
    throw ValidationError("evaluate_quantile: first regressor entry must be the intercept 1");
  }
  Eigen::MatrixXd q(fit.m(), fit.d());
  for (int k = 0; k < fit.m(); ++k) {
    q.row(k) = (fit.beta[static_cast<std::size_t>(k)].transpose() * x).transpose();
  }
  return q;
}

Eigen::MatrixXd barycentric_ranks(const VqrFit& fit) {
  const int n = static_cast<int>(fit.plan.pi.cols());
  if (n == 0) throw StateError("barycentric_ranks: fit has no transport plan");
  if (fit.plan.nu.size() != n) {
    throw StateError("barycentric_ranks: plan is missing its column marginal");
  }
  Eigen::MatrixXd ranks = fit.plan.pi.transpose() * fit.grid.U;  // n x d
  for (int j = 0; j < n; ++j) {
    if (!(fit.plan.nu[j] > 0.0)) {
      throw ValidationError("barycentric_ranks: observation " + std::to_string(j) +
                            " has non-positive weight");
    }
    ranks.row(j) /= fit.plan.nu[j];
  }
  return ranks;
}

MonotonicityReport monotonicity_report(const VqrFit& fit, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd q = evaluate_quantile(fit, x);
  const int m = fit.m();
  const double tol = 1e-8 * (1.0 + q.cwiseAbs().maxCoeff());

  MonotonicityReport rep;
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int k2 = k + 1; k2 < m; ++k2) {
      const double s = (fit.grid.U.row(k) - fit.grid.U.row(k2))
                           .dot(q.row(k) - q.row(k2));
      ++rep.checked;
      if (s < -tol) {
        ++rep.violations;
        worst = std::min(worst, s);
      }
    }
  }
  rep.worst = worst;
  rep.fraction = rep.checked > 0 ? static_cast<double>(rep.violations) / rep.checked : 0.0;
  return rep;
}

CrossPartialReport cross_partial(const VqrFit& fit, const Eigen::VectorXd& x) {
  const RankGrid& g = fit.grid;
  if (!g.is_tensor() || g.d() != 2) {
    throw CapabilityError("cross_partial: needs a two-dimensional tensor rank grid");
  }
  if (static_cast<int>(x.size()) != fit.p()) {
    throw ValidationError("cross_partial: regressor vector has wrong length");
  }
  if (x[0] != 1.0) {
    throw ValidationError("cross_partial: first regressor entry must be the intercept 1");
  }
  const int m1 = g.shape[0];
  const int m2 = g.shape[1];
  if (m1 < 3 || m2 < 3) {
    throw CapabilityError("cross_partial: needs at least three atoms per dimension");
  }

  const Eigen::VectorXd phi = fit.duals.b * x;  // scalar potential at each atom
  const std::vector<double> h = g.spacing();
  const double denom = 4.0 * h[0] * h[1];

  CrossPartialReport rep;
  rep.value.resize(m1 - 2, m2 - 2);
  for (int i1 = 1; i1 + 1 < m1; ++i1) {
    for (int i2 = 1; i2 + 1 < m2; ++i2) {
      rep.value(i1 - 1, i2 - 1) =
          (phi[g.flat_index({i1 + 1, i2 + 1})] - phi[g.flat_index({i1 + 1, i2 - 1})] -
           phi[g.flat_index({i1 - 1, i2 + 1})] + phi[g.flat_index({i1 - 1, i2 - 1})]) /
          denom;
    }
  }
  rep.total = rep.value.size();
  rep.min_value = rep.value.minCoeff();
  rep.tolerance = 1e-8 * (1.0 + rep.value.cwiseAbs().maxCoeff());
  rep.negative = (rep.value.array() < -rep.tolerance).count();
  return rep;
}

Eigen::MatrixXd quantile_treatment_effect(const VqrFit& fit, const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& x1) {
  return evaluate_quantile(fit, x1) - evaluate_quantile(fit, x0);
}

CopulaReport empirical_copula(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                              int lattice) {
  if (r1.size() != r2.size()) {
    throw ValidationError("empirical_copula: rank samples differ in length");
  }
  const int n = static_cast<int>(r1.size());
  if (n == 0) throw ValidationError("empirical_copula: rank samples are empty");
  if (lattice < 1) throw ValidationError("empirical_copula: lattice must be positive");

  // Assign each point to the cell (b/L, (b+1)/L] exactly, then accumulate.
  const auto cell_of = [lattice](double v) {
    int b = std::clamp(static_cast<int>(std::floor(v * lattice)), 0, lattice - 1);
    while (b + 1 < lattice && v > static_cast<double>(b + 1) / lattice) ++b;
    while (b > 0 && v <= static_cast<double>(b) / lattice) --b;
    return b;
  };

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(lattice, lattice);
  for (int t = 0; t < n; ++t) {
    counts(cell_of(r1[t]), cell_of(r2[t])) += 1.0;
  }

  CopulaReport rep;
  rep.lattice = lattice;
  rep.copula = Eigen::MatrixXd::Zero(lattice, lattice);
  for (int i = 0; i < lattice; ++i) {
    for (int j = 0; j < lattice; ++j) {
      double c = counts(i, j);
      if (i > 0) c += rep.copula(i - 1, j);
      if (j > 0) c += rep.copula(i, j - 1);
      if (i > 0 && j > 0) c -= rep.copula(i - 1, j - 1);
      rep.copula(i, j) = c;
    }
  }
  rep.copula /= static_cast<double>(n);

  for (int i = 0; i < lattice; ++i) {
    const double level = static_cast<double>(i + 1) / lattice;
    rep.max_marginal_dev_1 =
        std::max(rep.max_marginal_dev_1, std::abs(rep.copula(i, lattice - 1) - level));
    rep.max_marginal_dev_2 =
        std::max(rep.max_marginal_dev_2, std::abs(rep.copula(lattice - 1, i) - level));
  }
  return rep;
}

}  // namespace vqr
