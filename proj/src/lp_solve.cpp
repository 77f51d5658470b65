#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "vqr/errors.hpp"
#include "vqr/lp.hpp"

namespace vqr {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Normal-equation workspace: factorizations of
///   S(D) = A diag(D) A' + delta I
/// realized by augmenting A with identity columns, so the sparsity pattern
/// of S (diagonal included) is fixed and the symbolic analysis is reused
/// across interior-point iterations.
class NormalEquations {
 public:
  explicit NormalEquations(const SpMat& A)
      : rows_(static_cast<int>(A.rows())), cols_(static_cast<int>(A.cols())) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(A.nonZeros()) + rows_);
    for (int c = 0; c < A.outerSize(); ++c) {
      for (SpMat::InnerIterator it(A, c); it; ++it) {
        trips.emplace_back(static_cast<int>(it.row()), c, it.value());
      }
    }
    for (int r = 0; r < rows_; ++r) trips.emplace_back(r, cols_ + r, 1.0);
    aug_.resize(rows_, cols_ + rows_);
    aug_.setFromTriplets(trips.begin(), trips.end());
    aug_.makeCompressed();
    aug_t_ = aug_.transpose();
    aug_t_.makeCompressed();
  }

  /// Rebuild S for the given diagonal (length = num vars) and regularizer,
  /// then factorize.  Returns false if the factorization fails.
  bool factorize(const Vec& d, double delta) {
    Vec d_aug(cols_ + rows_);
    d_aug.head(cols_) = d;
    d_aug.tail(rows_).setConstant(delta);
    SpMat scaled = aug_ * d_aug.asDiagonal();
    s_ = scaled * aug_t_;
    if (!analyzed_) {
      ldlt_.analyzePattern(s_);
      analyzed_ = true;
    }
    ldlt_.factorize(s_);
    return ldlt_.info() == Eigen::Success;
  }

  /// Solve S w = rhs with iterative refinement.
  Vec solve(const Vec& rhs) const {
    Vec w = ldlt_.solve(rhs);
    const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
    for (int round = 0; round < 3; ++round) {
      Vec r = rhs - s_ * w;
      if (r.lpNorm<Eigen::Infinity>() <= 1e-14 * scale) break;
      w += ldlt_.solve(r);
    }
    return w;
  }

 private:
  int rows_, cols_;
  SpMat aug_, aug_t_, s_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  bool analyzed_ = false;
};

double step_length(const Vec& v, const Vec& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct Residuals {
  double primal_inf;   // |Ax - rhs|_inf
  double dual_eq_inf;  // |A'y - z - c|_inf (internal Newton residual)
  double dual_inf;     // |(A'y - c)_-|_inf (certificate quantity)
  double gap;          // |c'x - rhs'y|
  double objective;
  double dual_objective;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const SolveOptions& opts) {
  const int N = problem.num_vars();
  const int M = problem.num_rows();
  if (N < 1 || M < 1) throw ValidationError("solve: empty problem");
  if (problem.c.size() != N || problem.rhs.size() != M) {
    throw ValidationError("solve: objective/rhs sizes disagree with A");
  }
  if (!(opts.tol > 0.0)) throw ValidationError("solve: tolerance must be positive");

  const SpMat& A = problem.A;
  SpMat At = A.transpose();
  At.makeCompressed();
  const Vec& c = problem.c;
  const Vec& rhs = problem.rhs;
  const double rhs_scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
  const double c_scale = 1.0 + c.lpNorm<Eigen::Infinity>();

  NormalEquations ne(A);

  // ---- Starting point ---------------------------------------------------
  // Least-squares duals: y = (AA')^{-1} A c, z from the shifted reduced
  // costs; the primal is the supplied strictly feasible point when present
  // (the transport and rank-score instances always carry one), otherwise
  // the shifted least-squares primal.
  if (!ne.factorize(Vec::Ones(N), 1e-8)) {
    throw SolverError("solve: initial least-squares factorization failed");
  }
  Vec x;
  const bool have_x0 = problem.x0.size() == N && problem.x0.minCoeff() > 0.0;
  if (have_x0) {
    x = problem.x0;
  } else {
    Vec w = ne.solve(rhs);
    x = At * w;
    const double shift = std::max(0.0, -1.5 * x.minCoeff());
    x.array() += shift;
  }
  Vec y = ne.solve(A * c);
  Vec z = At * y - c;
  {
    const double shift = std::max(0.0, -1.5 * z.minCoeff());
    z.array() += shift;
    double xz = x.dot(z);
    if (!(xz > 0.0)) {
      z.setOnes();
      xz = x.sum();
    }
    const double dx = 0.5 * xz / z.sum();
    const double dz = 0.5 * xz / x.sum();
    if (!have_x0) x.array() += dx;
    z.array() += dz;
    if (!(x.minCoeff() > 0.0)) x.array() += 1.0 - x.minCoeff();
    if (!(z.minCoeff() > 0.0)) z.array() += 1.0 - z.minCoeff();
  }

  auto measure = [&](const Vec& xv, const Vec& yv, const Vec& zv) {
    Residuals r;
    Vec w = At * yv;
    r.primal_inf = (A * xv - rhs).lpNorm<Eigen::Infinity>();
    r.dual_eq_inf = (w - zv - c).lpNorm<Eigen::Infinity>();
    r.dual_inf = std::max(0.0, -(w - c).minCoeff());
    r.objective = c.dot(xv);
    r.dual_objective = rhs.dot(yv);
    r.gap = std::abs(r.objective - r.dual_objective);
    return r;
  };

  auto certified = [&](const Residuals& r) {
    return r.primal_inf <= 1e-8 * rhs_scale && r.dual_inf <= 1e-8 * c_scale &&
           r.gap <= 1e-7 * (1.0 + std::abs(r.objective));
  };
  auto at_target = [&](const Residuals& r) {
    return r.primal_inf <= opts.tol * rhs_scale && r.dual_eq_inf <= opts.tol * c_scale &&
           r.dual_inf <= opts.tol * c_scale && r.gap <= opts.tol * (1.0 + std::abs(r.objective));
  };

  double delta = 1e-10;
  double mu_prev = std::numeric_limits<double>::infinity();
  int stalled = 0;
  int iter = 0;
  std::string message;
  SolveStatus status = SolveStatus::numerical_failure;
  Residuals res = measure(x, y, z);

  for (;; ++iter) {
    res = measure(x, y, z);
    const double mu = x.dot(z) / N;

    if (at_target(res)) {
      status = SolveStatus::optimal;
      message = "optimal: target tolerance reached";
      break;
    }
    if (certified(res)) {
      // Progress-based acceptance at the numerical floor: certified bounds
      // hold and the complementarity product has stopped contracting.
      stalled = (mu > 0.5 * mu_prev) ? stalled + 1 : 0;
      if (stalled >= 2 || mu <= 0.0) {
        status = SolveStatus::optimal;
        message = "optimal: certified residual bounds at the numerical precision floor";
        break;
      }
    } else {
      stalled = 0;
    }
    if (iter >= opts.max_iter) {
      if (certified(res)) {
        status = SolveStatus::optimal;
        message = "optimal: certified residual bounds at iteration limit";
      } else {
        status = SolveStatus::numerical_failure;
        message = "iteration limit reached without certificate";
      }
      break;
    }
    if (!(mu > 0.0) || !x.allFinite() || !z.allFinite() || !y.allFinite()) {
      status = certified(res) ? SolveStatus::optimal : SolveStatus::numerical_failure;
      message = status == SolveStatus::optimal
                    ? "optimal: certified residual bounds at the numerical precision floor"
                    : "non-finite iterate";
      break;
    }
    mu_prev = mu;

    // Diagonal x/z, clamped only against overflow in the factorization.
    Vec d = (x.array() / z.array()).cwiseMin(1e16).cwiseMax(1e-16).matrix();
    bool factor_ok = ne.factorize(d, delta);
    while (!factor_ok && delta < 1.0) {
      delta *= 100.0;
      factor_ok = ne.factorize(d, delta);
    }
    if (!factor_ok) {
      status = certified(res) ? SolveStatus::optimal : SolveStatus::numerical_failure;
      message = status == SolveStatus::optimal
                    ? "optimal: certified residual bounds (factorization breakdown)"
                    : "normal-equation factorization breakdown";
      break;
    }

    const Vec rp = rhs - A * x;
    const Vec rd = c - At * y + z;  // target: A'y - z = c

    // Predictor (affine scaling) direction.
    Vec ne_rhs = A * (d.cwiseProduct(rd) - x) - rp;
    Vec dy = ne.solve(ne_rhs);
    Vec dz = At * dy - rd;
    Vec dx = -x - d.cwiseProduct(dz);

    const double ap_aff = std::min(1.0, step_length(x, dx));
    const double ad_aff = std::min(1.0, step_length(z, dz));
    const double mu_aff = (x + ap_aff * dx).dot(z + ad_aff * dz) / N;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3);
    sigma = std::min(std::max(sigma, 1e-8), 1.0 - 1e-8);

    // Corrector: recenter toward sigma*mu and cancel the second-order term.
    const Vec rc =
        (sigma * mu - x.array() * z.array() - dx.array() * dz.array()).matrix();
    ne_rhs = A * (d.cwiseProduct(rd) + rc.cwiseQuotient(z)) - rp;
    dy = ne.solve(ne_rhs);
    dz = At * dy - rd;
    dx = rc.cwiseQuotient(z) - d.cwiseProduct(dz);

    if (!dx.allFinite() || !dy.allFinite() || !dz.allFinite()) {
      if (delta < 1.0) {
        delta *= 100.0;
        continue;
      }
      status = certified(res) ? SolveStatus::optimal : SolveStatus::numerical_failure;
      message = status == SolveStatus::optimal
                    ? "optimal: certified residual bounds (non-finite direction)"
                    : "non-finite search direction";
      break;
    }

    const double gamma = mu < 1e-5 ? 0.99995 : 0.995;
    const double ap = std::min(1.0, gamma * step_length(x, dx));
    const double ad = std::min(1.0, gamma * step_length(z, dz));
    x += ap * dx;
    y += ad * dy;
    z += ad * dz;

    if (opts.verbose) {
      std::fprintf(stderr, "[%s] it %3d  mu %.3e  rp %.3e  rd %.3e  gap %.3e\n",
                   problem.name.c_str(), iter, mu, res.primal_inf, res.dual_eq_inf, res.gap);
    }
  }

  LpSolution sol;
  sol.status = status;
  sol.x = x;
  sol.y = y;
  sol.z = z;
  sol.objective = res.objective;
  sol.dual_objective = res.dual_objective;
  sol.primal_inf = res.primal_inf;
  sol.dual_inf = res.dual_inf;
  sol.gap = res.gap;
  sol.iterations = iter;
  sol.message = message;
  return sol;
}

}  // namespace vqr
