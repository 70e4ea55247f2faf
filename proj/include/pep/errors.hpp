#pragma once

#include <stdexcept>

namespace pep {

// Malformed or inconsistent initial data (bad file, negative mass, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver was asked something it cannot answer (negative time, no shock at z, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pep
