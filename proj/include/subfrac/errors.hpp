#pragma once

#include <stdexcept>
#include <string>

namespace subfrac {

/// Problem data failed an assumption check; carries the offending check names.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A fixed-point loop exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/// Non-finite state detected while stepping.
class BlowUpError : public std::runtime_error {
public:
  explicit BlowUpError(const std::string& what) : std::runtime_error(what) {}
};

/// |(f(t,x,·), ω)| fell below the configured floor.
class DegenerateSourceError : public std::runtime_error {
public:
  explicit DegenerateSourceError(const std::string& what) : std::runtime_error(what) {}
};

/// An a priori bound was violated while the strict monitor was active.
class MonitorViolationError : public std::runtime_error {
public:
  explicit MonitorViolationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subfrac
