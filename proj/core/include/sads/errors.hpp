#pragma once

#include <stdexcept>
#include <string>

namespace sads {

/// Bad run configuration (grid too coarse, malformed key=value, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver failed to converge; carries the best residual reached.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

/// A physics-level check failed (bracket violated, bound broken, ...).
class PhysicsError : public std::runtime_error {
 public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sads
