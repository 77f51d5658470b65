#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vqr/dataset.hpp"
#include "vqr/errors.hpp"
#include "vqr/grid.hpp"
#include "vqr/lp.hpp"
#include "vqr/rng.hpp"

namespace {

vqr::Dataset random_dataset(int n, int d, int extra_regressors, std::uint64_t seed) {
  vqr::Rng rng(seed);
  Eigen::MatrixXd Y(n, d);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r) Y(i, r) = rng.normal();
  Eigen::MatrixXd X(n, 1 + extra_regressors);
  X.col(0).setOnes();
  for (int i = 0; i < n; ++i)
    for (int l = 1; l <= extra_regressors; ++l) X(i, l) = rng.normal();
  return vqr::make_dataset(Y, X);
}

void check_certificates(const vqr::LpProblem& problem, const vqr::LpSolution& sol) {
  REQUIRE(sol.status == vqr::SolveStatus::optimal);
  CHECK(sol.x.minCoeff() >= -1e-10);
  CHECK(sol.primal_inf <= 1e-8 * (1.0 + problem.rhs.cwiseAbs().maxCoeff()));
  CHECK(sol.dual_inf <= 1e-8 * (1.0 + problem.c.cwiseAbs().maxCoeff()));
  CHECK(sol.gap <= 1e-7 * (1.0 + std::abs(sol.objective)));

  // The stored residual record must agree with an independent measurement.
  const double primal = (problem.A * sol.x - problem.rhs).cwiseAbs().maxCoeff();
  CHECK(std::abs(primal - sol.primal_inf) <= 1e-12 * (1.0 + primal));
  const double gap = std::abs(sol.objective - sol.dual_objective);
  CHECK(std::abs(gap - sol.gap) <= 1e-12 * (1.0 + gap));
}

}  // namespace

TEST_CASE("two-atom worked example reaches the comonotone objective") {
  Eigen::MatrixXd Y(2, 1), X(2, 1);
  Y << 0.0, 1.0;
  X << 1.0, 1.0;
  Eigen::MatrixXd U(2, 1);
  U << 0.25, 0.75;

  vqr::RankGrid grid = vqr::tensor_grid({2});
  REQUIRE((grid.U - U).cwiseAbs().maxCoeff() == 0.0);

  const vqr::Dataset data = vqr::make_dataset(Y, X);
  const vqr::LpProblem problem = vqr::assemble_primal(data, grid);
  const vqr::LpSolution sol = vqr::solve(problem, {1e-11, 200, false});

  REQUIRE(sol.status == vqr::SolveStatus::optimal);
  // Matching low rank to low outcome: 0.5 * (0.25 * 0 + 0.75 * 1).
  CHECK(std::abs(sol.objective - 0.375) < 1e-9);

  // The optimal coupling is the diagonal permutation with mass one half.
  CHECK(std::abs(sol.x[0 + 2 * 0] - 0.5) < 1e-7);
  CHECK(std::abs(sol.x[1 + 2 * 1] - 0.5) < 1e-7);
  CHECK(std::abs(sol.x[1 + 2 * 0]) < 1e-7);
}

TEST_CASE("assembled program has the documented shape") {
  const vqr::Dataset data = random_dataset(235, 2, 1, 5);
  const vqr::RankGrid grid = vqr::tensor_grid({20, 20});
  const vqr::LpProblem problem = vqr::assemble_primal(data, grid);

  CHECK(problem.num_vars() == 94000);          // m * n
  CHECK(problem.num_rows() == 1035);           // n + m * p
  CHECK(problem.c.size() == 94000);
  CHECK(problem.x0.size() == 94000);
  CHECK(problem.meta.n == 235);
  CHECK(problem.meta.m == 400);
  CHECK(problem.meta.p == 2);

  // c-vector layout: variable (k, j) at k + m*j scores u_k . y_j.
  const int k = 137, j = 211;
  CHECK(problem.c[k + 400 * j] == doctest::Approx(grid.U.row(k).dot(data.Y.row(j))));

  // The independent coupling is attached as a strictly feasible start.
  CHECK(problem.x0.minCoeff() > 0.0);
  CHECK((problem.A * problem.x0 - problem.rhs).cwiseAbs().maxCoeff() < 1e-12);

  // Zero weights cannot enter the interior-point form.
  vqr::Dataset zero_weight = data;
  zero_weight.nu[3] = 0.0;
  zero_weight.nu /= zero_weight.nu.sum();
  CHECK_THROWS_AS(vqr::assemble_primal(zero_weight, grid), vqr::ValidationError);
}

TEST_CASE("row multipliers carry the right-hand-side sensitivity sign") {
  // Small generic LP with independent rows, so the dual is unique and the
  // objective is differentiable in the right-hand side.
  vqr::LpProblem problem;
  problem.A.resize(2, 3);
  std::vector<Eigen::Triplet<double>> trips = {
      {0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}, {1, 2, 1.0}};
  problem.A.setFromTriplets(trips.begin(), trips.end());
  problem.c.resize(3);
  problem.c << 1.0, 0.3, -0.2;
  problem.rhs.resize(2);
  problem.rhs << 1.0, 1.5;
  problem.x0.resize(3);
  problem.x0 << 0.4, 0.6, 0.9;

  const vqr::LpSolution base = vqr::solve(problem, {1e-11, 200, false});
  REQUIRE(base.status == vqr::SolveStatus::optimal);

  const double eps = 1e-3;
  for (int row = 0; row < 2; ++row) {
    vqr::LpProblem bumped = problem;
    bumped.rhs[row] += eps;
    const vqr::LpSolution sol = vqr::solve(bumped, {1e-11, 200, false});
    REQUIRE(sol.status == vqr::SolveStatus::optimal);
    CHECK(std::abs((sol.objective - base.objective) - eps * base.y[row]) < 1e-8);
  }
}

TEST_CASE("certificates hold on a random ensemble including rank-deficient designs") {
  // 1-d and 2-d responses, with and without regressors.  Saturated two-group
  // designs make the constraint matrix exactly rank deficient, which the
  // solver must absorb.
  for (const std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    vqr::Dataset data = random_dataset(9, 1, 1, seed);
    vqr::LpProblem p1 = vqr::assemble_primal(data, vqr::tensor_grid({7}));
    check_certificates(p1, vqr::solve(p1));

    vqr::Dataset data2 = random_dataset(8, 2, 0, seed + 100);
    vqr::LpProblem p2 = vqr::assemble_primal(data2, vqr::tensor_grid({3, 3}));
    check_certificates(p2, vqr::solve(p2));
  }

  // Saturated design: intercept plus a two-group indicator.
  vqr::Rng rng(77);
  const int n = 12;
  Eigen::MatrixXd Y(n, 1), X(n, 2);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = i < n / 2 ? 0.0 : 1.0;
    Y(i, 0) = rng.normal() + 2.0 * X(i, 1);
  }
  const vqr::Dataset grouped = vqr::make_dataset(Y, X);
  const vqr::LpProblem p3 = vqr::assemble_primal(grouped, vqr::tensor_grid({5}));
  check_certificates(p3, vqr::solve(p3));
}

TEST_CASE("gap report is gated on optimality") {
  vqr::LpSolution sol;
  sol.status = vqr::SolveStatus::numerical_failure;
  CHECK_THROWS_AS(vqr::duality_gap_report(sol), vqr::StateError);

  sol.status = vqr::SolveStatus::optimal;
  sol.gap = 1e-10;
  sol.primal_inf = 2e-12;
  sol.dual_inf = 3e-12;
  const vqr::GapReport report = vqr::duality_gap_report(sol);
  CHECK(report.gap == 1e-10);
  CHECK(report.primal_inf == 2e-12);
  CHECK(report.dual_inf == 3e-12);
}

TEST_CASE("infeasible programs are not certified optimal") {
  vqr::LpProblem problem;
  problem.A.resize(1, 2);
  std::vector<Eigen::Triplet<double>> trips = {{0, 0, 1.0}, {0, 1, 1.0}};
  problem.A.setFromTriplets(trips.begin(), trips.end());
  problem.c.resize(2);
  problem.c << 1.0, 1.0;
  problem.rhs.resize(1);
  problem.rhs << -1.0;  // x >= 0 cannot reach a negative sum

  const vqr::LpSolution sol = vqr::solve(problem, {1e-9, 60, false});
  CHECK(sol.status != vqr::SolveStatus::optimal);
  CHECK(!sol.message.empty());
}

TEST_CASE("lp text dump carries the whole program") {
  Eigen::MatrixXd Y(2, 1), X(2, 1);
  Y << -1.0, 2.0;
  X << 1.0, 1.0;
  const vqr::Dataset data = vqr::make_dataset(Y, X);
  const vqr::LpProblem problem = vqr::assemble_primal(data, vqr::tensor_grid({2}));

  std::ostringstream out;
  vqr::write_lp_format(problem, out);
  const std::string text = out.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
  CHECK(text.find("x3") != std::string::npos);  // all four variables named (0-based)
}
