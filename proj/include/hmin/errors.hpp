#pragma once

#include <stdexcept>
#include <string>

namespace hmin {

// Root of every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from the closest category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something malformed (wrong dimension, non-unit point, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A coordinate lies outside (or inside the collar of) the regular domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Base of the purely numerical failures (exit code 5 in the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// |p| exceeds the bound where the Hamiltonian's square root is real.
class NumericalDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Radicand of the slope formula is negative: the point is beyond a turning point.
class TurningRegionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// lambda + (K/2) A(x) vanishes, the slope formula has a zero denominator.
class SingularSlopeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Turning point is a (near) double root of the radicand.
class DegenerateTurningPoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateParamError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DriftError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmin
