#pragma once

#include <stdexcept>
#include <string>

namespace daa {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wait-map load failures are kept distinct so callers can report precisely.
struct MapCorruptError : ValidationError {
  using ValidationError::ValidationError;
};

struct MapVersionError : ValidationError {
  using ValidationError::ValidationError;
};

struct MapDimensionError : ValidationError {
  using ValidationError::ValidationError;
};

struct NoIntentError : ValidationError {
  using ValidationError::ValidationError;
};

struct InfeasibleGeometryError : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace daa
