#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxgn/problem.hpp"

namespace proxgn {

struct SolverConfig {
  int max_iterations = 200;
  double step_tolerance = 1e-14;
  double stationarity_tolerance = 1e-11;
  double prox_tolerance = 1e-12;
  double jacobian_injectivity_threshold = 1e-12;
  int max_prox_iterations = 10000;
};

enum class SolveStatus {
  converged,
  max_iterations,
  singular_jacobian,
  left_domain,
  prox_failure
};

std::string to_string(SolveStatus status);

/// One row per visited iterate x_k. step_norm and prox_inner_iterations
/// describe the step leaving x_k and are zero on the final row.
struct IterationRecord {
  int index = 0;
  Vector point;
  std::optional<double> sigma;  // ||x_k - x*|| when the minimizer is known
  double step_norm = 0.0;
  double residual_norm = 0.0;
  double smallest_singular = 0.0;
  int prox_inner_iterations = 0;
  double stationarity_residual = 0.0;
};

struct RunReport {
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<IterationRecord> trace;
  Vector final_point;
  std::string message;

  int iterations() const {
    return trace.empty() ? 0 : static_cast<int>(trace.size()) - 1;
  }
};

/// Gauss-Newton direction step x - Jac^+ F_val; requires Jac injective
/// above the configured threshold (throws SingularJacobianError).
Vector gn_step(const Vector& F_val, const Matrix& jac, const Vector& x,
               const SolverConfig& cfg);

struct IterationOutcome {
  Vector next;
  IterationRecord record;
};

/// One proximal Gauss-Newton step
///   next = prox_J^{H(x)}(x - F'(x)^+ F(x)),  H(x) = F'(x)^T F'(x).
/// Throws SingularJacobianError, InnerSolverStalled, or LeftDomainError.
IterationOutcome pgn_iterate(const Problem& problem, const Vector& x,
                             const SolverConfig& cfg);

/// Runs the iteration until the stationarity residual
/// dist(-F'(x)^T F(x), dJ(x)) or the step norm drops below tolerance.
/// Failures are reported through the status, never silently.
RunReport solve(const Problem& problem, const Vector& x0,
                const SolverConfig& cfg = {});

/// ||F(y) - F(x) - F'(x) (y - x)||.
double linearization_error(const Problem& problem, const Vector& x,
                           const Vector& y);

/// Audit of a run against the one-step error bounds of the local
/// convergence theory. Slacks are bound minus observed value; on a
/// compliant run every slack is nonnegative up to prox inexactness.
struct VerificationReport {
  double sigma0 = 0.0;
  double radius = 0.0;  // certified r = min(rho, delta)
  double final_sigma = 0.0;
  bool frozen_coefficients_valid = false;       // sigma0 in (0, nu)
  std::vector<double> recursion_slacks;          // coefficients frozen at sigma0
  std::vector<double> per_step_recursion_slacks; // coefficients at sigma_k
  std::vector<double> linearization_slacks;      // e_f(sigma_k, 0) - beta ||E_F||
  std::vector<double> quadratic_ratio_estimates; // sigma_{k+1} / sigma_k^2
  bool monotone_decrease_ok = true;
  bool stayed_in_ball_ok = true;

  bool all_checks_ok(double slack_tolerance) const;
};

VerificationReport verify_run(const Problem& problem, const RunReport& report,
                              const MajorantModel& model,
                              const LocalConstants& consts,
                              const Vector& x_star);

}  // namespace proxgn
