#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "vqr/dataset.hpp"
#include "vqr/errors.hpp"
#include "vqr/fit.hpp"
#include "vqr/grid.hpp"
#include "vqr/rng.hpp"
#include "vqr/scalar_qr.hpp"

namespace {

vqr::Dataset intercept_only(const Eigen::VectorXd& y, const Eigen::VectorXd& w = {}) {
  return vqr::make_dataset(y, Eigen::MatrixXd::Ones(y.size(), 1), w);
}

double weighted_check_loss(const vqr::Dataset& data, const Eigen::VectorXd& beta, double t) {
  double loss = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    loss += data.nu[i] * vqr::check_loss(data.Y(i, 0) - data.X.row(i).dot(beta), t);
  }
  return loss;
}

// Exhaustive oracle: some optimal coefficient vector interpolates p
// observations, so the optimal value is the minimum over all such fits.
double breakpoint_oracle(const vqr::Dataset& data, double t) {
  const int n = data.n();
  const int p = data.p();
  double best = std::numeric_limits<double>::infinity();
  if (p == 1) {
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd beta(1);
      beta << data.Y(i, 0);
      best = std::min(best, weighted_check_loss(data, beta, t));
    }
    return best;
  }
  REQUIRE(p == 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = data.X(i, 1) - data.X(j, 1);
      if (std::abs(dx) < 1e-12) continue;
      const double slope = (data.Y(i, 0) - data.Y(j, 0)) / dx;
      Eigen::VectorXd beta(2);
      beta << data.Y(i, 0) - slope * data.X(i, 1), slope;
      best = std::min(best, weighted_check_loss(data, beta, t));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("median of three points") {
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 4.0;
  const vqr::QrFitAtT fit = vqr::kb_fit(intercept_only(y), 0.5);
  CHECK(std::abs(fit.beta[0] - 2.0) < 1e-7);
  CHECK(fit.normal_eq_inf < 1e-8);
}

TEST_CASE("check loss matches the interpolation oracle") {
  vqr::Rng rng(41);
  for (const double t : {0.2, 0.5, 0.8}) {
    // Intercept-only.
    Eigen::VectorXd y = rng.normal_vector(15);
    const vqr::Dataset d0 = intercept_only(y);
    CHECK(std::abs(vqr::kb_fit(d0, t).check_loss - breakpoint_oracle(d0, t)) < 1e-8);

    // Slope model, unweighted and weighted.
    const int n = 14;
    Eigen::MatrixXd Y(n, 1), X(n, 2);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = rng.normal();
      Y(i, 0) = 0.7 * X(i, 1) + rng.normal();
      w[i] = 0.5 + rng.uniform01();
    }
    const vqr::Dataset d1 = vqr::make_dataset(Y, X);
    CHECK(std::abs(vqr::kb_fit(d1, t).check_loss - breakpoint_oracle(d1, t)) < 1e-8);
    const vqr::Dataset d2 = vqr::make_dataset(Y, X, w);
    CHECK(std::abs(vqr::kb_fit(d2, t).check_loss - breakpoint_oracle(d2, t)) < 1e-8);
  }
}

TEST_CASE("program value equals the check loss through the duality identity") {
  vqr::Rng rng(52);
  const int n = 25;
  Eigen::MatrixXd Y(n, 1), X(n, 2);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.uniform01() * 3.0;
    Y(i, 0) = 1.0 + X(i, 1) + 0.5 * rng.normal();
  }
  const vqr::Dataset data = vqr::make_dataset(Y, X);
  const double mean_y = data.nu.dot(data.Y.col(0));
  for (const double t : {0.1, 0.37, 0.5, 0.9}) {
    const vqr::QrFitAtT fit = vqr::kb_fit(data, t);
    const double from_program = fit.objective - (1.0 - t) * mean_y;
    CHECK(std::abs(fit.check_loss - from_program) < 1e-7);
    CHECK(fit.normal_eq_inf < 1e-8);
    CHECK(fit.a.minCoeff() >= 0.0);
    CHECK(fit.a.maxCoeff() <= 1.0);
  }
}

TEST_CASE("kb_fit validates its inputs") {
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 3.0;
  const vqr::Dataset data = intercept_only(y);
  CHECK_THROWS_AS(vqr::kb_fit(data, 0.0), vqr::ValidationError);
  CHECK_THROWS_AS(vqr::kb_fit(data, 1.0), vqr::ValidationError);

  // Collinear design.
  Eigen::MatrixXd X(3, 2);
  X << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
  CHECK_THROWS_AS(vqr::kb_fit(vqr::make_dataset(y, X), 0.5), vqr::ValidationError);

  // Vector outcomes are out of scope for the scalar lane.
  Eigen::MatrixXd Y2(3, 2);
  Y2 << 1.0, 0.0, 2.0, 1.0, 3.0, -1.0;
  CHECK_THROWS_AS(vqr::kb_fit(vqr::make_dataset(Y2, X.leftCols(1)), 0.5),
                  vqr::CapabilityError);
}

TEST_CASE("intercept-only rank scores fall monotonically from one to zero") {
  vqr::Rng rng(63);
  Eigen::VectorXd y = rng.normal_vector(9);
  const vqr::Dataset data = intercept_only(y);
  const Eigen::VectorXd t_grid = vqr::midpoint_t_grid(9);
  const vqr::QrProcess process = vqr::qr_process(data, t_grid);

  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j + 1 < 9; ++j) {
      CHECK(process.a(i, j + 1) <= process.a(i, j) + 1e-6);
    }
  }
  // Scalar ranks of distinct points on a matched grid are (rank + 0.5) / n.
  std::vector<double> sorted(y.data(), y.data() + 9);
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 9; ++i) {
    const int rank = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), y[i]) -
                                      sorted.begin());
    CHECK(std::abs(process.u_tilde[i] - (rank + 0.5) / 9.0) < 1e-6);
  }
  CHECK(process.crossing.crossings == 0);
}

TEST_CASE("the quantile process matches the grid fit on matched scales") {
  vqr::Rng rng(74);
  Eigen::VectorXd y = rng.normal_vector(9);
  const vqr::Dataset data = intercept_only(y);

  vqr::FitOptions fo;
  fo.tol = 1e-10;
  const vqr::VqrFit vfit = vqr::fit(data, vqr::tensor_grid({9}), fo);
  const vqr::QrProcess process = vqr::qr_process(data, vqr::midpoint_t_grid(9));
  const vqr::QrVqrComparison comp = vqr::compare_vqr_qr(vfit, process, data);

  CHECK(comp.max_abs_gap < 1e-7);
  CHECK(comp.max_fitted_gap < 1e-7);

  const vqr::Table table = vqr::comparison_table(comp);
  CHECK(table.names.size() == 6);
  CHECK(table.values.rows() == 9);
  CHECK(table.values(4, 0) == doctest::Approx(0.5));
}

TEST_CASE("level grids are validated") {
  Eigen::VectorXd y(4);
  y << 1.0, 2.0, 3.0, 4.0;
  const vqr::Dataset data = intercept_only(y);
  Eigen::VectorXd bad(2);
  bad << 0.5, 0.5;  // not strictly increasing
  CHECK_THROWS_AS(vqr::qr_process(data, bad), vqr::ValidationError);
  bad << 0.0, 0.5;  // boundary level
  CHECK_THROWS_AS(vqr::qr_process(data, bad), vqr::ValidationError);
  CHECK_THROWS_AS(vqr::midpoint_t_grid(0), vqr::ValidationError);
}

TEST_CASE("results do not depend on the worker count") {
  vqr::Rng rng(85);
  const int n = 30;
  Eigen::MatrixXd Y(n, 1), X(n, 2);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal();
    Y(i, 0) = X(i, 1) + (0.5 + 0.3 * X(i, 1) * X(i, 1)) * rng.normal();
  }
  const vqr::Dataset data = vqr::make_dataset(Y, X);
  const Eigen::VectorXd t_grid = vqr::midpoint_t_grid(13);

  setenv("VQR_THREADS", "1", 1);
  const vqr::QrProcess serial = vqr::qr_process(data, t_grid);
  setenv("VQR_THREADS", "4", 1);
  const vqr::QrProcess parallel = vqr::qr_process(data, t_grid);
  unsetenv("VQR_THREADS");

  CHECK((serial.beta - parallel.beta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((serial.a - parallel.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((serial.u_tilde - parallel.u_tilde).cwiseAbs().maxCoeff() == 0.0);
}
