#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

/// Base of every error thrown by the library. The CLI maps the concrete
/// subclass onto a process exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (p out of range,
/// non-positive truncation radius, evaluation at the singularity, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Inconsistent or inadmissible configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Iterations that fail to converge, blow-up, singularity approach.
class NumericalError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Non-convergence of an iterative solver; carries the last residual.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

/// The classical trajectory came closer to the singularity than the guard.
class SingularityError : public NumericalError {
public:
  SingularityError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

/// Non-finite samples produced by the field integrator.
class BlowUpError : public NumericalError {
public:
  BlowUpError(const std::string& what, long step)
      : NumericalError(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

/// Modulation fit left the box or the comoving frame cannot be formed.
class FitError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace nlslab
