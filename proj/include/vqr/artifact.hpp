#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "vqr/dataset.hpp"
#include "vqr/fit.hpp"

namespace vqr {

/// Fitted model <-> JSON.  Everything needed to reuse a fit is stored: grid,
/// potentials, coefficients, normalization, objective, residual record, and
/// the coupling as (atom, observation, mass) triplets above 1e-12.  The files
/// are deterministic: rerunning the same fit writes identical bytes.
nlohmann::json fit_to_json(const VqrFit& fit);
VqrFit fit_from_json(const nlohmann::json& j);
void save_fit(const std::string& path, const VqrFit& fit);
VqrFit load_fit(const std::string& path);

/// Conditional quantile surface at regressor vector x: columns u1..ud then
/// q1..qd, one row per grid atom.
Table quantile_surface_table(const VqrFit& fit, const Eigen::VectorXd& x);

/// Record of one CLI run: what ran, on which inputs, producing which outputs.
/// Input/output files are hashed when the manifest is written.  Contents are
/// deterministic (no clocks, no environment capture).
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  nlohmann::json options = nlohmann::json::object();
};

/// Conventional sidecar name: "<artifact>.manifest.json".
std::string manifest_path_for(const std::string& artifact_path);

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace vqr
