#pragma once

#include <stdexcept>
#include <string>

namespace fras {

/* Base class for every error this library raises. kind() is a stable
 * machine-readable tag used by the CLI error records. */
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const { return "error"; }
};

class DimensionError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "dimension_error"; }
};

class ParameterError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "parameter_error"; }
};

class ModelError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "model_error"; }
};

/* State left the funnel: the barrier transform (and thus the control law)
 * is undefined there. */
class FunnelViolationError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "funnel_violation"; }
};

/* A circumvent function cannot be built for the requested geometry
 * (obstacle spans the whole projection, or the bump peak leaves the
 * state space). */
class GeometricInfeasibilityError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "geometric_infeasibility"; }
};

/* psi_i + alpha_i fell below the numeric gap guard. */
class AdaptiveSingularityError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "adaptive_singularity"; }
};

/* gamma_U <= gamma_L at some evaluated time: the funnel has no interior. */
class FunnelCollapseError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "funnel_collapse"; }
};

class IntegrationError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "integration_error"; }
};

class ReplayError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "replay_error"; }
};

class ParseError : public Error {
public:
  using Error::Error;
  const char* kind() const override { return "parse_error"; }
};

}  // namespace fras
