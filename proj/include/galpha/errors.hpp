#pragma once

#include <stdexcept>
#include <string>

namespace galpha {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotImplemented : std::logic_error {
  using std::logic_error::logic_error;
};

// Degenerate or inverted geometry (detJ <= 0 at the map level).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constitutive evaluation failed (J <= 0: element inversion). Carries the
// element id when raised during assembly so the marcher can reject the step.
struct ConstitutiveError : std::runtime_error {
  explicit ConstitutiveError(const std::string& what, int element = -1)
      : std::runtime_error(what), element_id(element) {}
  int element_id;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace galpha
