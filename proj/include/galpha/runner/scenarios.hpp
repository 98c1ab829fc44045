#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "galpha/assembler/constraints.hpp"
#include "galpha/diagnostics/diagnostics.hpp"
#include "galpha/fem/mesh.hpp"
#include "galpha/hypermat/material.hpp"
#include "galpha/runner/config.hpp"

namespace galpha::runner {

/// One segment of a simulation under a fixed set of boundary conditions.
/// Scenarios with a boundary-condition switch (twisted bar release) expose
/// two phases; the marcher restarts with the new constraints at t_end.
struct Phase {
  assembler::BoundaryConditions bc;
  double t_end;
};

/// A fully assembled benchmark problem.
struct Scenario {
  std::string name;
  fem::Mesh mesh;
  int ncomp = 3;       // dofs per node; 1 selects the scalar wave path
  bool scalar = false;
  hypermat::LameParams mat{1.0, 1.0, 1.0};
  std::vector<Phase> phases;
  Eigen::VectorXd u0, v0;
  bool has_exact = false;
  diagnostics::ExactSolution exact;
};

/// Build the named scenario from a resolved config.
Scenario build_scenario(const ScenarioConfig& cfg);

/// Triangular load schedule of the tossed ruler, N/m of ruler width:
/// ramps to 2e8 at t = 0.005 s, back to zero at t = 0.01 s.
double ruler_traction_schedule(double t);

/// Prescribed twist angle of the twisted bar, 8 pi t up to the release at
/// t = 0.25 s.
double bar_twist_angle(double t);

/// Structured shell mesh of a cylinder: a parameter box (circumference,
/// thickness, length) mapped onto the cylinder with the seam nodes merged.
/// Linear elements only.
fem::Mesh build_tube_mesh(double length, double diameter, double thickness,
                          const std::vector<int>& divisions);

}  // namespace galpha::runner
