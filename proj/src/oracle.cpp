#include "vqr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "vqr/errors.hpp"
#include "vqr/math.hpp"
#include "vqr/rng.hpp"

namespace vqr {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

void NormalSpec::validate() const {
  if (levels.empty()) throw ValidationError("NormalSpec: at least one level required");
  const int dim = d();
  if (dim < 1) throw ValidationError("NormalSpec: dimension must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& lvl = levels[i];
    if (!(lvl.prob > 0.0)) throw ValidationError("NormalSpec: level probabilities must be positive");
    total += lvl.prob;
    if (lvl.mu.size() != dim || lvl.omega.rows() != dim || lvl.omega.cols() != dim) {
      throw ValidationError("NormalSpec: dimension mismatch across levels");
    }
    if ((lvl.omega - lvl.omega.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) {
      throw ValidationError("NormalSpec: Omega must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lvl.omega);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
      throw ValidationError("NormalSpec: Omega must be positive definite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (levels[j].z == lvl.z) throw ValidationError("NormalSpec: duplicate level value");
    }
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("NormalSpec: level probabilities must sum to one");
  }
}

Eigen::MatrixXd NormalSpec::omega_sqrt(int level) const {
  if (level < 0 || level >= num_levels()) throw ValidationError("NormalSpec: level index out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(levels[level].omega);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXd NormalSpec::omega_inv_sqrt(int level) const {
  if (level < 0 || level >= num_levels()) throw ValidationError("NormalSpec: level index out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(levels[level].omega);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

std::string normal_spec_to_json(const NormalSpec& spec) {
  nlohmann::json j;
  j["levels"] = nlohmann::json::array();
  for (const auto& lvl : spec.levels) {
    nlohmann::json entry;
    entry["z"] = lvl.z;
    entry["prob"] = lvl.prob;
    entry["mu"] = std::vector<double>(lvl.mu.data(), lvl.mu.data() + lvl.mu.size());
    nlohmann::json omega = nlohmann::json::array();
    for (int r = 0; r < lvl.omega.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < lvl.omega.cols(); ++c) row.push_back(lvl.omega(r, c));
      omega.push_back(std::move(row));
    }
    entry["omega"] = std::move(omega);
    j["levels"].push_back(std::move(entry));
  }
  return j.dump();
}

NormalSpec normal_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("normal spec JSON: ") + e.what());
  }
  if (!j.contains("levels") || !j["levels"].is_array() || j["levels"].empty()) {
    throw SchemaError("normal spec JSON: 'levels' must be a non-empty array");
  }
  NormalSpec spec;
  for (const auto& entry : j["levels"]) {
    for (const char* key : {"z", "prob", "mu", "omega"}) {
      if (!entry.contains(key)) {
        throw SchemaError(std::string("normal spec JSON: level missing key '") + key + "'");
      }
    }
    NormalLevel lvl;
    lvl.z = entry["z"].get<double>();
    lvl.prob = entry["prob"].get<double>();
    const auto mu = entry["mu"].get<std::vector<double>>();
    lvl.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<int>(mu.size()));
    const auto& om = entry["omega"];
    const int dim = static_cast<int>(mu.size());
    if (!om.is_array() || static_cast<int>(om.size()) != dim) {
      throw SchemaError("normal spec JSON: omega shape mismatch");
    }
    lvl.omega.resize(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (!om[r].is_array() || static_cast<int>(om[r].size()) != dim) {
        throw SchemaError("normal spec JSON: omega shape mismatch");
      }
      for (int c = 0; c < dim; ++c) lvl.omega(r, c) = om[r][c].get<double>();
    }
    spec.levels.push_back(std::move(lvl));
  }
  spec.validate();
  return spec;
}

NormalSpec load_normal_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return normal_spec_from_json(buffer.str());
}

void save_normal_spec(const std::string& path, const NormalSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << normal_spec_to_json(spec) << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

SimulatedSample simulate_normal(const NormalSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw ValidationError("simulate_normal: n must be >= 1");
  const int d = spec.d();
  const int L = spec.num_levels();

  std::vector<Eigen::MatrixXd> sqrts(L);
  for (int l = 0; l < L; ++l) sqrts[l] = spec.omega_sqrt(l);
  std::vector<double> cum(L);
  double acc = 0.0;
  for (int l = 0; l < L; ++l) {
    acc += spec.levels[l].prob;
    cum[l] = acc;
  }
  cum[L - 1] = 1.0;

  SimulatedSample sim;
  sim.z.resize(n);
  sim.level_index.resize(n);
  sim.latent.resize(n, d);
  Eigen::MatrixXd Y(n, d);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, L);
  X.col(0).setOnes();

  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double v = rng.uniform_open01();
    int lvl = 0;
    while (lvl < L - 1 && v > cum[lvl]) ++lvl;
    sim.level_index[i] = lvl;
    sim.z[i] = spec.levels[lvl].z;
    for (int r = 0; r < d; ++r) sim.latent(i, r) = rng.normal();
    Y.row(i) = (spec.levels[lvl].mu + sqrts[lvl] * sim.latent.row(i).transpose()).transpose();
    if (lvl > 0) X(i, lvl) = 1.0;
  }

  sim.data = make_dataset(Y, X);
  sim.data.x_names.push_back("intercept");
  for (int l = 1; l < L; ++l) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "z==%g", spec.levels[l].z);
    sim.data.x_names.push_back(buf);
  }
  for (int r = 0; r < d; ++r) sim.data.y_names.push_back("y" + std::to_string(r + 1));
  return sim;
}

Eigen::VectorXd normal_quantile(const NormalSpec& spec, const Eigen::VectorXd& u, int level) {
  if (u.size() != spec.d()) throw ValidationError("normal_quantile: rank dimension mismatch");
  Eigen::VectorXd gauss(u.size());
  for (int r = 0; r < u.size(); ++r) {
    if (!(u[r] > 0.0 && u[r] < 1.0)) {
      throw ValidationError("normal_quantile: rank coordinates must lie strictly inside (0,1)");
    }
    gauss[r] = std_normal_quantile(u[r]);
  }
  return normal_quantile_gaussian_ref(spec, gauss, level);
}

Eigen::VectorXd normal_quantile_gaussian_ref(const NormalSpec& spec, const Eigen::VectorXd& u,
                                             int level) {
  if (level < 0 || level >= spec.num_levels()) {
    throw ValidationError("normal_quantile: level index out of range");
  }
  if (u.size() != spec.d()) throw ValidationError("normal_quantile: rank dimension mismatch");
  return spec.levels[level].mu + spec.omega_sqrt(level) * u;
}

Eigen::VectorXd normal_rank(const NormalSpec& spec, const Eigen::VectorXd& y, int level) {
  if (level < 0 || level >= spec.num_levels()) {
    throw ValidationError("normal_rank: level index out of range");
  }
  if (y.size() != spec.d()) throw ValidationError("normal_rank: dimension mismatch");
  const Eigen::VectorXd w = spec.omega_inv_sqrt(level) * (y - spec.levels[level].mu);
  Eigen::VectorXd u(w.size());
  for (int r = 0; r < w.size(); ++r) u[r] = std_normal_cdf(w[r]);
  return u;
}

double monge_ampere_check(const NormalSpec& spec, int level,
                          const std::vector<Eigen::VectorXd>& sample_u) {
  spec.validate();
  if (level < 0 || level >= spec.num_levels()) {
    throw ValidationError("monge_ampere_check: level index out of range");
  }
  const int d = spec.d();
  const NormalLevel& lvl = spec.levels[level];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lvl.omega);
  const double log_det_omega = es.eigenvalues().array().log().sum();

  double worst = 0.0;
  for (const auto& u : sample_u) {
    if (u.size() != d) throw ValidationError("monge_ampere_check: rank dimension mismatch");
    Eigen::VectorXd gauss(d);
    double log_jac_diag = 0.0;  // log prod dN/du_r = -sum log phi(N(u_r))
    for (int r = 0; r < d; ++r) {
      gauss[r] = std_normal_quantile(u[r]);
      log_jac_diag -= std::log(std_normal_pdf(gauss[r]));
    }
    // Density of Y|Z at Q(u,z): with the symmetric square root the quadratic
    // form collapses to |N(u)|^2.
    const double log_density =
        -0.5 * (d * kLog2Pi + log_det_omega + gauss.squaredNorm());
    // det D_u Q = det(Omega^{1/2}) * prod_r dN/du_r, and log det(Omega^{1/2})
    // = log_det_omega / 2.
    const double log_jac = 0.5 * log_det_omega + log_jac_diag;
    const double residual = std::abs(1.0 - std::exp(log_density + log_jac));
    worst = std::max(worst, residual);
  }
  return worst;
}

TransportOracle brute_force_transport(const Eigen::MatrixXd& U, const Eigen::MatrixXd& Y) {
  const int n = static_cast<int>(Y.rows());
  if (U.rows() != n) throw ValidationError("brute_force_transport: U and Y must have equal row counts");
  if (U.cols() != Y.cols()) throw ValidationError("brute_force_transport: dimension mismatch");
  if (n < 1 || n > 8) throw CapabilityError("brute_force_transport: supports 1 <= n = m <= 8");

  const Eigen::MatrixXd cost = U * Y.transpose();  // cost(k, j) = u_k . y_j
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  TransportOracle out;
  double best = 0.0;
  std::vector<std::vector<int>> ties;
  std::vector<int> best_perm;
  do {
    double obj = 0.0;
    for (int k = 0; k < n; ++k) obj += cost(k, perm[k]);
    obj /= n;
    const double tol = 1e-12 * (1.0 + std::abs(obj));
    if (best_perm.empty() || obj > best + tol) {
      best = obj;
      best_perm = perm;
      ties.clear();
      ties.push_back(perm);
    } else if (std::abs(obj - best) <= tol) {
      ties.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  out.objective = best;
  out.ties = std::move(ties);
  out.pi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) out.pi(k, best_perm[k]) = 1.0 / n;
  return out;
}

DenseLpResult dense_simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw ValidationError("dense_simplex: shape mismatch");

  // Tableau over columns [x | artificials]; rows scaled so b >= 0.
  const int total = n + m;
  Eigen::MatrixXd T(m, total);
  Eigen::VectorXd rhs = b;
  T.setZero();
  T.leftCols(n) = A;
  for (int r = 0; r < m; ++r) {
    if (rhs[r] < 0.0) {
      rhs[r] = -rhs[r];
      T.row(r).head(n) = -T.row(r).head(n);
    }
    T(r, n + r) = 1.0;
  }
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = n + r;

  constexpr double kPivotTol = 1e-11;

  auto pivot = [&](int row, int col) {
    rhs[row] /= T(row, col);
    T.row(row) /= T(row, col);
    for (int r = 0; r < m; ++r) {
      if (r == row) continue;
      const double factor = T(r, col);
      if (factor != 0.0) {
        T.row(r) -= factor * T.row(row);
        rhs[r] -= factor * rhs[row];
      }
    }
    basis[row] = col;
  };

  // Bland's rule: entering = lowest-index improving column; leaving = ratio
  // test with lowest basis index as tie-break.  Guarantees termination.
  auto run_phase = [&](const Eigen::VectorXd& cost, int allowed_cols) -> bool {
    for (long guard = 0; guard < 200000; ++guard) {
      Eigen::VectorXd dual = Eigen::VectorXd::Zero(m);
      // Reduced cost via basis costs: r_j = cost_j - cB' B^{-1} a_j; the
      // tableau already holds B^{-1}A, so cB' rows give r directly.
      Eigen::VectorXd cb(m);
      for (int r = 0; r < m; ++r) cb[r] = cost[basis[r]];
      int entering = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        bool in_basis = false;
        for (int r = 0; r < m; ++r) {
          if (basis[r] == j) {
            in_basis = true;
            break;
          }
        }
        if (in_basis) continue;
        const double reduced = cost[j] - cb.dot(T.col(j));
        if (reduced > kPivotTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;  // optimal for this phase
      int leaving = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m; ++r) {
        if (T(r, entering) > kPivotTol) {
          const double ratio = rhs[r] / T(r, entering);
          if (leaving < 0 || ratio < best_ratio - 1e-13 ||
              (std::abs(ratio - best_ratio) <= 1e-13 && basis[r] < basis[leaving])) {
            leaving = r;
            best_ratio = ratio;
          }
        }
      }
      if (leaving < 0) return false;  // unbounded (cannot happen on transport forms)
      pivot(leaving, entering);
      (void)dual;
    }
    return false;
  };

  // Phase 1: drive artificial mass to zero.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
  phase1.tail(m).setConstant(-1.0);
  if (!run_phase(phase1, total)) return DenseLpResult{};
  double art_mass = 0.0;
  for (int r = 0; r < m; ++r) {
    if (basis[r] >= n) art_mass += rhs[r];
  }
  if (art_mass > 1e-9) return DenseLpResult{};  // infeasible

  // Pivot any basic artificial (at zero) out where a real column allows it;
  // rows that stay artificial are redundant and harmless at level zero.
  for (int r = 0; r < m; ++r) {
    if (basis[r] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(T(r, j)) > 1e-9) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase 2: maximize the real objective; artificial columns frozen out.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total);
  phase2.head(n) = c;
  if (!run_phase(phase2, n)) return DenseLpResult{};

  DenseLpResult out;
  out.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] = rhs[r];
  }
  out.objective = c.dot(out.x);
  out.optimal = true;
  return out;
}

double brute_force_vqr(const Dataset& data, const RankGrid& grid) {
  data.validate();
  grid.validate();
  const long n = data.n();
  const long m = grid.m();
  if (m * n > 64) throw CapabilityError("brute_force_vqr: requires m*n <= 64");

  const long N = m * n;
  const long M = n + m * data.p();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, N);
  Eigen::VectorXd c(N);
  Eigen::VectorXd b(M);
  for (long j = 0; j < n; ++j) {
    for (long k = 0; k < m; ++k) {
      const long col = k + m * j;
      c[col] = grid.U.row(k).dot(data.Y.row(j));
      A(j, col) = 1.0;
      for (long l = 0; l < data.p(); ++l) A(n + k + m * l, col) = data.X(j, l);
    }
  }
  b.head(n) = data.nu;
  const Eigen::VectorXd xbar = data.x_bar();
  for (long l = 0; l < data.p(); ++l) b.segment(n + m * l, m) = grid.mu * xbar[l];

  const DenseLpResult res = dense_simplex_maximize(A, b, c);
  if (!res.optimal) throw SolverError("brute_force_vqr: dense simplex failed");
  return res.objective;
}

}  // namespace vqr
