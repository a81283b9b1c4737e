#pragma once

#include <stdexcept>
#include <string>

namespace proxgn {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A matrix argument contains NaN or infinite entries.
struct InvalidMatrix : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// A precondition of an inequality check does not hold
/// (e.g. the perturbation bound requires ||A^+|| ||A-B|| < 1).
struct HypothesisViolated : Error {
  using Error::Error;
};

struct HNotPositiveDefinite : Error {
  using Error::Error;
};

/// The inner proximal solver exhausted its iteration budget.
struct InnerSolverStalled : Error {
  using Error::Error;
};

/// The residual-size condition h < 1 fails; no convergence radius exists.
struct H3Violated : Error {
  explicit H3Violated(double h_value)
      : Error("condition h < 1 violated: h = " + std::to_string(h_value)),
        h(h_value) {}
  double h;
};

/// Closed-form and bisection routes for the same constant disagree.
struct CrossCheckMismatch : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct MissingGroundTruth : Error {
  using Error::Error;
};

struct NotInjectiveAtMinimizer : Error {
  using Error::Error;
};

struct SingularJacobianError : Error {
  using Error::Error;
};

struct LeftDomainError : Error {
  using Error::Error;
};

/// A majorant model was requested with a parameter that makes it
/// meaningless (e.g. a Smale model with gamma = 0).
struct DegenerateModel : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace proxgn
