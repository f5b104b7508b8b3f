#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

/// Base class for all solver errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid spatial domain or grid parameters.
class InvalidDomainError : public Error {
public:
  using Error::Error;
};

/// A linear system was (numerically) singular. Carries the time level at
/// which the solve failed when known, -1 otherwise.
class SingularMatrixError : public Error {
public:
  explicit SingularMatrixError(const std::string& msg, int level = -1)
      : Error(msg), level_(level) {}
  int level() const { return level_; }

private:
  int level_;
};

/// Newton's method exceeded its iteration budget. Carries the failing time
/// step index when known, -1 otherwise.
class NewtonDivergedError : public Error {
public:
  explicit NewtonDivergedError(const std::string& msg, int step = -1)
      : Error(msg), step_(step) {}
  int step() const { return step_; }

private:
  int step_;
};

/// Fields or trajectories that must share a mesh/time grid do not.
class GridMismatchError : public Error {
public:
  using Error::Error;
};

/// Armijo backtracking exhausted its trial budget.
class LineSearchError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration; the message names the offending key.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Missing or malformed profile data file.
class ProfileError : public Error {
public:
  using Error::Error;
};

} // namespace thinfilm
