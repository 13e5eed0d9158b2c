#pragma once

#include <stdexcept>
#include <string>

namespace nemflow {

// Malformed or out-of-range run configuration; maps to CLI exit code 4.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Spectral input lacked the conjugate symmetry of a real field.
struct symmetry_error : std::runtime_error {
  explicit symmetry_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a degenerate director (|d| near zero).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a step produces non-finite fields; t_last is the last good time.
// The partially completed trajectory, if any, is attached by evolve(); maps to
// CLI exit code 3.
struct blowup_error : std::runtime_error {
  blowup_error(const std::string& what, double t) : std::runtime_error(what), t_last(t) {}
  double t_last;
};

}  // namespace nemflow
