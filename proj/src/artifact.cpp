#include "vqr/artifact.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include "vqr/errors.hpp"
#include "vqr/hash.hpp"

namespace vqr {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& matrix) {
  json rows = json::array();
  for (long i = 0; i < matrix.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < matrix.cols(); ++j) row.push_back(matrix(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError("fit file: '" + what + "' must be an array of rows");
  const long rows = static_cast<long>(j.size());
  long cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError("fit file: '" + what + "' rows must be arrays");
    if (cols < 0) cols = static_cast<long>(row.size());
    if (static_cast<long>(row.size()) != cols) {
      throw SchemaError("fit file: '" + what + "' rows have unequal lengths");
    }
  }
  Eigen::MatrixXd out(rows, std::max(cols, 0L));
  for (long i = 0; i < rows; ++i) {
    for (long c = 0; c < cols; ++c) {
      const auto& cell = j[i][c];
      if (!cell.is_number()) throw SchemaError("fit file: '" + what + "' holds a non-number");
      out(i, c) = cell.get<double>();
    }
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError("fit file: '" + what + "' must be an array");
  Eigen::VectorXd out(static_cast<long>(j.size()));
  for (long i = 0; i < out.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError("fit file: '" + what + "' holds a non-number");
    out[i] = j[i].get<double>();
  }
  return out;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("fit file: missing field '") + key + "'");
  return *it;
}

constexpr double kPlanStoreThreshold = 1e-12;
constexpr const char* kFitFormat = "vqr-fit/1";
constexpr const char* kManifestFormat = "vqr-manifest/1";

}  // namespace

json fit_to_json(const VqrFit& fit) {
  json j;
  j["format"] = kFitFormat;

  json grid;
  grid["U"] = matrix_to_json(fit.grid.U);
  grid["mu"] = vector_to_json(fit.grid.mu);
  grid["shape"] = fit.grid.shape;
  grid["seed"] = fit.grid.seed;
  j["grid"] = std::move(grid);

  j["psi"] = vector_to_json(fit.duals.psi);
  j["b"] = matrix_to_json(fit.duals.b);
  if (fit.has_beta) {
    json betas = json::array();
    for (const auto& bk : fit.beta) betas.push_back(matrix_to_json(bk));
    j["beta"] = std::move(betas);
  }

  json plan;
  json triplets = json::array();
  for (long k = 0; k < fit.plan.pi.rows(); ++k) {
    for (long obs = 0; obs < fit.plan.pi.cols(); ++obs) {
      const double mass = fit.plan.pi(k, obs);
      if (mass > kPlanStoreThreshold) {
        triplets.push_back(json::array({k, obs, mass}));
      }
    }
  }
  plan["triplets"] = std::move(triplets);
  plan["nu"] = vector_to_json(fit.plan.nu);
  plan["marginal_error"] = fit.plan.marginal_error;
  plan["mass_error"] = fit.plan.mass_error;
  plan["mean_independence_error"] = fit.plan.mean_independence_error;
  j["plan"] = std::move(plan);

  j["objective"] = fit.objective;

  json residuals;
  residuals["primal_inf"] = fit.report.primal_inf;
  residuals["dual_inf"] = fit.report.dual_inf;
  residuals["gap"] = fit.report.gap;
  residuals["iterations"] = fit.report.iterations;
  residuals["message"] = fit.report.message;
  j["residuals"] = std::move(residuals);

  json norm;
  norm["y_center"] = vector_to_json(fit.normalization.y_center);
  norm["y_scale"] = fit.normalization.y_scale;
  norm["x_center"] = vector_to_json(fit.normalization.x_center);
  norm["x_scale"] = vector_to_json(fit.normalization.x_scale);
  j["normalization"] = std::move(norm);

  json dims;
  dims["m"] = fit.grid.m();
  dims["d"] = fit.grid.d();
  dims["p"] = static_cast<int>(fit.duals.b.cols());
  dims["n"] = static_cast<int>(fit.plan.nu.size());
  j["dims"] = std::move(dims);
  return j;
}

VqrFit fit_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("fit file: top level must be an object");
  if (field(j, "format").get<std::string>() != kFitFormat) {
    throw SchemaError("fit file: unknown format tag");
  }

  VqrFit fit;
  const json& grid = field(j, "grid");
  fit.grid.U = matrix_from_json(field(grid, "U"), "grid.U");
  fit.grid.mu = vector_from_json(field(grid, "mu"), "grid.mu");
  fit.grid.shape = field(grid, "shape").get<std::vector<int>>();
  fit.grid.seed = field(grid, "seed").get<std::uint64_t>();
  fit.grid.validate();

  fit.duals.psi = vector_from_json(field(j, "psi"), "psi");
  fit.duals.b = matrix_from_json(field(j, "b"), "b");
  if (j.contains("beta")) {
    const json& betas = j["beta"];
    if (!betas.is_array()) throw SchemaError("fit file: 'beta' must be an array");
    fit.beta.reserve(betas.size());
    for (const auto& bk : betas) fit.beta.push_back(matrix_from_json(bk, "beta[k]"));
    if (static_cast<int>(fit.beta.size()) != fit.grid.m()) {
      throw SchemaError("fit file: 'beta' length differs from the atom count");
    }
    fit.has_beta = true;
  }

  const json& dims = field(j, "dims");
  const int m = field(dims, "m").get<int>();
  const int n = field(dims, "n").get<int>();
  if (m != fit.grid.m()) throw SchemaError("fit file: dims.m differs from the grid");

  const json& plan = field(j, "plan");
  fit.plan.nu = vector_from_json(field(plan, "nu"), "plan.nu");
  if (static_cast<int>(fit.plan.nu.size()) != n) {
    throw SchemaError("fit file: plan.nu length differs from dims.n");
  }
  fit.plan.pi = Eigen::MatrixXd::Zero(m, n);
  for (const auto& trip : field(plan, "triplets")) {
    if (!trip.is_array() || trip.size() != 3) {
      throw SchemaError("fit file: plan triplets must be [atom, observation, mass]");
    }
    const long k = trip[0].get<long>();
    const long obs = trip[1].get<long>();
    if (k < 0 || k >= m || obs < 0 || obs >= n) {
      throw SchemaError("fit file: plan triplet index out of range");
    }
    fit.plan.pi(k, obs) = trip[2].get<double>();
  }
  fit.plan.marginal_error = field(plan, "marginal_error").get<double>();
  fit.plan.mass_error = field(plan, "mass_error").get<double>();
  fit.plan.mean_independence_error = field(plan, "mean_independence_error").get<double>();

  fit.objective = field(j, "objective").get<double>();

  const json& residuals = field(j, "residuals");
  fit.report.status = SolveStatus::optimal;
  fit.report.primal_inf = field(residuals, "primal_inf").get<double>();
  fit.report.dual_inf = field(residuals, "dual_inf").get<double>();
  fit.report.gap = field(residuals, "gap").get<double>();
  fit.report.iterations = field(residuals, "iterations").get<int>();
  fit.report.message = field(residuals, "message").get<std::string>();

  const json& norm = field(j, "normalization");
  fit.normalization.y_center = vector_from_json(field(norm, "y_center"), "y_center");
  fit.normalization.y_scale = field(norm, "y_scale").get<double>();
  fit.normalization.x_center = vector_from_json(field(norm, "x_center"), "x_center");
  fit.normalization.x_scale = vector_from_json(field(norm, "x_scale"), "x_scale");

  if (fit.duals.b.rows() != fit.grid.m()) {
    throw SchemaError("fit file: potential rows differ from the atom count");
  }
  if (static_cast<int>(fit.duals.psi.size()) != n) {
    throw SchemaError("fit file: psi length differs from dims.n");
  }
  return fit;
}

void save_fit(const std::string& path, const VqrFit& fit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_fit: cannot open '" + path + "' for writing");
  out << fit_to_json(fit).dump(1) << '\n';
  if (!out) throw IoError("save_fit: write failure on '" + path + "'");
}

VqrFit load_fit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_fit: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("load_fit: '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return fit_from_json(j);
  } catch (const json::exception& e) {
    throw SchemaError("load_fit: '" + path + "' has a malformed field: " + e.what());
  }
}

Table quantile_surface_table(const VqrFit& fit, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd q = evaluate_quantile(fit, x);
  const int m = fit.m();
  const int d = fit.d();

  Table table;
  table.names.reserve(2 * static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) table.names.push_back("u" + std::to_string(r + 1));
  for (int r = 0; r < d; ++r) table.names.push_back("q" + std::to_string(r + 1));
  table.values.resize(m, 2 * d);
  table.values.leftCols(d) = fit.grid.U;
  table.values.rightCols(d) = q;
  return table;
}

std::string manifest_path_for(const std::string& artifact_path) {
  return artifact_path + ".manifest.json";
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  json j;
  j["format"] = kManifestFormat;
  j["command"] = manifest.command;
  j["args"] = manifest.args;
  json inputs = json::array();
  for (const auto& p : manifest.inputs) {
    inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  }
  j["inputs"] = std::move(inputs);
  json outputs = json::array();
  for (const auto& p : manifest.outputs) {
    outputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  }
  j["outputs"] = std::move(outputs);
  j["options"] = manifest.options;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_manifest: cannot open '" + path + "' for writing");
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write_manifest: write failure on '" + path + "'");
}

}  // namespace vqr
