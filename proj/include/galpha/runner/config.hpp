#pragma once

#include <string>
#include <vector>

namespace galpha::runner {

/// Fully resolved scenario configuration. Defaults come from the scenario
/// catalog; a config file overrides individual keys.
struct ScenarioConfig {
  std::string scenario;
  double load_scale = 1.0;  // scales applied tractions (desk-scale runs)

  // [mesh]
  std::vector<double> extents;
  std::vector<int> divisions;
  int dim = 3;
  int order = 1;

  // [material]
  double E = 1.0;
  double nu = 0.3;
  double rho0 = 1.0;

  // [integrator]
  std::string family = "n1";  // n1 | n2 | general
  double rho_b = 1.0;
  double rho_s = 1.0;
  double alpha_f = 0.0;
  std::string update_form = "displacement";  // displacement | acceleration
  std::string truncation = "fixed_terms";    // fixed_terms | to_tolerance
  int terms = 2;
  double trunc_tol = 1e-10;
  int k_max = 50;

  // [adaptivity]
  bool adaptive = true;
  double tol = 0.1;
  double tol_min = 0.01;
  double rho_tol = 0.9;
  double dt0 = 1e-3;
  double dt_min = 1e-12;
  int max_rejections = 20;

  // [time]
  double t_f = 1.0;

  // [mass]
  std::string mass = "consistent";  // consistent | lumped
  double lin_tol = 1e-10;

  // [output]
  std::string csv;
  std::string vtk_dir;
  int stride = 0;  // 0 disables snapshots
};

/// Catalog defaults for a named scenario. Throws ConfigError for an unknown
/// name, listing the available scenarios.
ScenarioConfig scenario_defaults(const std::string& name);

std::vector<std::string> scenario_names();

/// Parse a sectioned key=value file, resolve scenario defaults, validate,
/// and echo the resolved configuration into the output directory.
ScenarioConfig load_config(const std::string& path);

/// Render a config in the file grammar (the echo format).
std::string render_config(const ScenarioConfig& cfg);

}  // namespace galpha::runner
