#pragma once

#include <functional>
#include <string>
#include <vector>

#include "galpha/alphacore/params.hpp"
#include "galpha/alphacore/spectral.hpp"
#include "galpha/diagnostics/diagnostics.hpp"
#include "galpha/marcher/marcher.hpp"
#include "galpha/runner/config.hpp"
#include "galpha/runner/scenarios.hpp"

namespace galpha::runner {

struct RunOutcome {
  bool completed = false;
  std::string abort_reason;
  int accepted = 0;
  int rejected = 0;
  marcher::State final_state;
};

/// Integrator parameters resolved from a config.
alphacore::AlphaParams integrator_params(const ScenarioConfig& cfg);

/// Per-accepted-step hook for callers that want time series without parsing
/// the CSV output.
using RunObserver = std::function<void(const marcher::State&, const marcher::StepReport&)>;

/// Full simulation: builds the scenario, marches every phase, writes one CSV
/// row per accepted step and VTK snapshots every `stride` accepted steps.
RunOutcome run_simulation(const ScenarioConfig& cfg, const RunObserver& observer = {});

/// Fixed-step convergence study against the scenario's exact solution.
/// Writes a CSV table (dt, error_u, error_v, order_u, order_v) when
/// `csv_path` is non-empty. Throws ConfigError for scenarios without an
/// exact solution.
std::vector<diagnostics::ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                                           const std::vector<double>& dts,
                                                           const std::string& csv_path);

/// Spectral-radius sweep for a parameter family, written as (theta, rho) CSV.
alphacore::SweepResult write_spectra(const std::string& family, double rho_b, double theta_max,
                                     int samples, const std::string& csv_path);

/// Dry-run checks: builds the mesh, constraints, and mass operator, and
/// returns a human-readable summary. Throws on any configuration problem.
std::string validate_config(const ScenarioConfig& cfg);

}  // namespace galpha::runner
