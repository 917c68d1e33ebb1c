#pragma once

#include <stdexcept>
#include <string>

namespace blackwell {

// Invalid input: malformed configs, bad kernels, dimension mismatches.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// The model has zero reward spread; hold times are undefined.
class DegenerateModelError : public ModelError {
 public:
  using ModelError::ModelError;
};

// A numerical routine exhausted its iteration budget.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace blackwell
