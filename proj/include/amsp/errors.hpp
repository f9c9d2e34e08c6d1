#pragma once

#include <stdexcept>
#include <string>

namespace amsp {

/// Invalid input parameters (bad T/B/mu, malformed instance data).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The MILP/LP engine failed or returned an unusable status.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A work guard (e.g. schedule enumeration size) was exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective values that must be ordered (z2sp >= zams >= zmsp, Q >= L) are not.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amsp
