#pragma once

#include <stdexcept>
#include <string>

namespace gyro {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad config keys, invalid parameter blocks.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside a model's validity window (e.g. temperature above the
// phonon regime).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Singular or unstable operating point: vanishing cos(phi) in L_J,
// non-positive effective inductance, stability boundary of epsilon.
class StabilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Design space with no feasible point.
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Time-domain integration aborted (blow-up, too many failed trials).
class SimulationError : public Error {
 public:
  using Error::Error;
};

// Ringdown fit did not converge or left an implausible residual.
class FitError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace gyro
