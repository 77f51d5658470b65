#include <fstream>
#include <ostream>
#include <vector>

#include "vqr/errors.hpp"
#include "vqr/lp.hpp"

namespace vqr {

LpProblem assemble_primal(const Dataset& data, const RankGrid& grid, long max_nonzeros) {
  data.validate();
  grid.validate();
  if (data.d() != grid.d()) {
    throw ValidationError("assemble_primal: Y and U must have the same number of columns");
  }
  for (int j = 0; j < data.n(); ++j) {
    if (!(data.nu[j] > 0.0)) {
      throw ValidationError(
          "assemble_primal: zero-weight observations are not representable in the "
          "interior-point form; drop them before fitting");
    }
  }

  const long n = data.n();
  const long m = grid.m();
  const long p = data.p();
  const long N = m * n;
  const long M = n + m * p;

  // Block 1 contributes one nonzero per variable; block 2 contributes one
  // nonzero per (variable, nonzero regressor component) pair.
  long nnz = N;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < p; ++l) {
      if (data.X(j, l) != 0.0) nnz += m;
    }
  }
  if (nnz > max_nonzeros) {
    throw ResourceError("assemble_primal: " + std::to_string(nnz) +
                        " nonzeros exceed the cap of " + std::to_string(max_nonzeros));
  }

  LpProblem lp;
  lp.meta = {static_cast<int>(n), static_cast<int>(m), static_cast<int>(p),
             static_cast<int>(data.d())};
  lp.name = "vqr_transport";

  lp.c.resize(N);
  for (long j = 0; j < n; ++j) {
    for (long k = 0; k < m; ++k) {
      lp.c[k + m * j] = grid.U.row(k).dot(data.Y.row(j));
    }
  }

  lp.rhs.resize(M);
  lp.rhs.head(n) = data.nu;
  const Eigen::VectorXd xbar = data.x_bar();
  for (long l = 0; l < p; ++l) {
    lp.rhs.segment(n + m * l, m) = grid.mu * xbar[l];
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (long j = 0; j < n; ++j) {
    for (long k = 0; k < m; ++k) {
      const long col = k + m * j;
      trips.emplace_back(static_cast<int>(j), static_cast<int>(col), 1.0);
      for (long l = 0; l < p; ++l) {
        const double xjl = data.X(j, l);
        if (xjl != 0.0) {
          trips.emplace_back(static_cast<int>(n + k + m * l), static_cast<int>(col), xjl);
        }
      }
    }
  }
  lp.A.resize(static_cast<int>(M), static_cast<int>(N));
  lp.A.setFromTriplets(trips.begin(), trips.end());
  lp.A.makeCompressed();

  // Independent coupling: strictly positive and exactly feasible.
  lp.x0.resize(N);
  for (long j = 0; j < n; ++j) {
    lp.x0.segment(j * m, m) = grid.mu * data.nu[j];
  }
  return lp;
}

GapReport duality_gap_report(const LpSolution& sol) {
  if (sol.status != SolveStatus::optimal) {
    throw StateError("duality_gap_report: solution status is not optimal");
  }
  return GapReport{sol.gap, sol.primal_inf, sol.dual_inf};
}

void write_lp_format(const LpProblem& problem, std::ostream& out) {
  out.precision(17);
  out << "\\ " << problem.name << ": " << problem.num_rows() << " rows, " << problem.num_vars()
      << " cols, " << problem.A.nonZeros() << " nonzeros\n";
  out << "Maximize\n obj:";
  int written = 0;
  for (int i = 0; i < problem.c.size(); ++i) {
    if (problem.c[i] == 0.0) continue;
    out << (problem.c[i] >= 0.0 ? " + " : " - ");
    out << std::abs(problem.c[i]) << " x" << i;
    if (++written % 8 == 0) out << "\n    ";
  }
  if (written == 0) out << " 0 x0";
  out << "\nSubject To\n";
  // Column-compressed storage; emit rows by walking the transpose.
  Eigen::SparseMatrix<double, Eigen::RowMajor> byrow(problem.A);
  for (int r = 0; r < byrow.rows(); ++r) {
    out << " c" << r << ":";
    int terms = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(byrow, r); it; ++it) {
      out << (it.value() >= 0.0 ? " + " : " - ") << std::abs(it.value()) << " x" << it.col();
      if (++terms % 8 == 0) out << "\n    ";
    }
    if (terms == 0) out << " 0 x0";
    out << " = " << problem.rhs[r] << "\n";
  }
  out << "Bounds\n";
  for (int i = 0; i < problem.num_vars(); ++i) out << " x" << i << " >= 0\n";
  out << "End\n";
}

void write_lp_format(const LpProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_lp_format(problem, out);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace vqr
