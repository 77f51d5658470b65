#pragma once

#include <iosfwd>
#include <string>
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vqr/dataset.hpp"
#include "vqr/grid.hpp"

namespace vqr {

/// Equality-form linear program
///
///     maximize   c'x   subject to   A x = rhs,   x >= 0,
///
/// stored sparse.  The quantile-regression transport instance has
/// N = m*n variables ordered vec-style (grid index k fastest: variable
/// (k,j) at k + m*j) and M = n + m*p rows: first the n observation-mass
/// rows, then the m*p mean-independence rows in column-major order
/// (row (k,l) at n + k + m*l).
struct LpProblem {
  Eigen::SparseMatrix<double> A;  ///< M x N, compressed
  Eigen::VectorXd c;              ///< N objective (maximized)
  Eigen::VectorXd rhs;            ///< M right-hand side
  Eigen::VectorXd x0;             ///< optional strictly positive feasible start (size 0 if none)
  struct Meta {
    int n = 0, m = 0, p = 0, d = 0;
  } meta;
  std::string name = "lp";

  int num_vars() const { return static_cast<int>(A.cols()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
};

enum class SolveStatus { optimal, infeasible, numerical_failure };

/// Residuals are always measured on the true problem data at the returned
/// iterate: primal_inf = |Ax - rhs|_inf, dual_inf = |(A'y - c)_-|_inf,
/// gap = |c'x - rhs'y|.
struct LpSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  Eigen::VectorXd x;       ///< primal variables (>= 0 up to 1e-10)
  Eigen::VectorXd y;       ///< row multipliers; sign: Lagrangian = c'x - y'(Ax - rhs)
  Eigen::VectorXd z;       ///< reduced costs A'y - c at the final iterate
  double objective = 0.0;  ///< c'x
  double dual_objective = 0.0;  ///< rhs'y
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string message;
};

struct SolveOptions {
  double tol = 1e-9;   ///< target relative accuracy for residuals and gap
  int max_iter = 200;
  bool verbose = false;
};

struct GapReport {
  double gap = 0.0;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
};

/// Assemble the discretized transport program for (data, grid):
/// c = vec(U Y'), block 1 (I_n (x) 1_m') vec(pi) = nu, block 2
/// (X' (x) I_m) vec(pi) = vec(mu nubar'X).  The independent coupling
/// vec(mu nu') is attached as a strictly feasible starting point.
/// Throws ResourceError when the assembled nonzero count would exceed
/// `max_nonzeros` (default 5e7).
LpProblem assemble_primal(const Dataset& data, const RankGrid& grid,
                          long max_nonzeros = 50'000'000);

/// Interior-point solve to certified primal-dual optimality.  Deterministic
/// for fixed inputs and options.  status == optimal guarantees
///   x >= -1e-10,  primal_inf <= 1e-8*(1+|rhs|_inf),
///   dual_inf <= 1e-8*(1+|c|_inf),  gap <= 1e-7*(1+|c'x|),
/// with the requested `tol` achieved whenever it is numerically reachable.
LpSolution solve(const LpProblem& problem, const SolveOptions& opts = {});

/// Accessor for the stored residual record; StateError unless optimal.
GapReport duality_gap_report(const LpSolution& sol);

/// Dump in LP text format (maximize, equality rows, x >= 0) for
/// cross-checking against external solvers.
void write_lp_format(const LpProblem& problem, std::ostream& out);
void write_lp_format(const LpProblem& problem, const std::string& path);

}  // namespace vqr
