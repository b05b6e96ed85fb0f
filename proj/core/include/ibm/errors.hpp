#pragma once

#include <stdexcept>
#include <string>

namespace ibm {

/// Process exit codes used by the command-line driver.
enum class ExitCode : int {
  kPass = 0,
  kVerdictFail = 1,
  kConfigError = 2,
  kNumericError = 3,
};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kNumericError; }
};

/// A parameter is outside its documented domain (t <= 1 for chi, p <= 0, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
};

class InsufficientData : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kConfigError; }
};

/// Two particles coincide, so a logarithmic pair term is singular.
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// A coordinate left the state space of the model (Bessel: x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateIntensity : public Error {
 public:
  using Error::Error;
};

/// Nystrom eigenvalues escaped [0, 1]; the quadrature grid is too coarse.
class KernelDiscretizationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InitFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ibm
