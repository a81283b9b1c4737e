#include "proxgn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace proxgn {

namespace {

struct Assessment {
  Vector residual;
  Matrix jac;
  InjectivityReport injectivity_report;
  double stationarity;
};

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.step_tolerance > 0.0) || !(cfg.stationarity_tolerance > 0.0) ||
      !(cfg.prox_tolerance > 0.0) ||
      !(cfg.jacobian_injectivity_threshold > 0.0)) {
    throw DomainError("solver tolerances must be positive");
  }
  if (cfg.max_iterations < 0 || cfg.max_prox_iterations <= 0) {
    throw DomainError("iteration budgets must be positive");
  }
}

Assessment assess(const Problem& problem, const Vector& x,
                  const SolverConfig& cfg) {
  Assessment a;
  a.residual = problem.map.evaluate(x);
  a.jac = problem.map.jacobian(x);
  a.injectivity_report = injectivity(a.jac, cfg.jacobian_injectivity_threshold);
  a.stationarity = subdifferential_distance(
      problem.penalty, x, -(a.jac.transpose() * a.residual));
  return a;
}

IterationRecord make_record(int index, const Problem& problem, const Vector& x,
                            const Assessment& a) {
  IterationRecord record;
  record.index = index;
  record.point = x;
  if (problem.known_minimizer.has_value()) {
    record.sigma = (x - *problem.known_minimizer).norm();
  }
  record.residual_norm = a.residual.norm();
  record.smallest_singular = a.injectivity_report.smallest_singular;
  record.stationarity_residual = a.stationarity;
  return record;
}

ProxResult step_from_assessment(const Problem& problem, const Vector& x,
                                const Assessment& a, const SolverConfig& cfg) {
  if (!a.injectivity_report.injective) {
    throw SingularJacobianError(
        "Jacobian is rank deficient (smallest singular value " +
        std::to_string(a.injectivity_report.smallest_singular) + ")");
  }
  const Vector gauss_newton_point = x - pseudoinverse(a.jac) * a.residual;
  const Matrix H = metric_operator(a.jac);
  return prox(problem.penalty, H, gauss_newton_point, cfg.prox_tolerance,
              cfg.max_prox_iterations);
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max_iterations";
    case SolveStatus::singular_jacobian:
      return "singular_jacobian";
    case SolveStatus::left_domain:
      return "left_domain";
    case SolveStatus::prox_failure:
      return "prox_failure";
  }
  return "unknown";
}

Vector gn_step(const Vector& F_val, const Matrix& jac, const Vector& x,
               const SolverConfig& cfg) {
  const InjectivityReport report =
      injectivity(jac, cfg.jacobian_injectivity_threshold);
  if (!report.injective) {
    throw SingularJacobianError(
        "Jacobian is rank deficient (smallest singular value " +
        std::to_string(report.smallest_singular) + ")");
  }
  return x - pseudoinverse(jac) * F_val;
}

IterationOutcome pgn_iterate(const Problem& problem, const Vector& x,
                             const SolverConfig& cfg) {
  validate_config(cfg);
  const Assessment a = assess(problem, x, cfg);
  const ProxResult step = step_from_assessment(problem, x, a, cfg);

  IterationOutcome outcome;
  outcome.record = make_record(0, problem, x, a);
  outcome.record.step_norm = (step.point - x).norm();
  outcome.record.prox_inner_iterations = step.inner_iterations;
  outcome.next = step.point;
  if (!problem.domain.contains(outcome.next)) {
    throw LeftDomainError("iterate left the problem domain");
  }
  return outcome;
}

RunReport solve(const Problem& problem, const Vector& x0,
                const SolverConfig& cfg) {
  validate_config(cfg);
  RunReport report;
  Vector x = x0;

  for (int k = 0;; ++k) {
    const Assessment a = assess(problem, x, cfg);
    report.trace.push_back(make_record(k, problem, x, a));
    IterationRecord& row = report.trace.back();

    if (a.stationarity <= cfg.stationarity_tolerance) {
      report.status = SolveStatus::converged;
      break;
    }
    if (k >= cfg.max_iterations) {
      report.status = SolveStatus::max_iterations;
      report.message = "iteration budget exhausted";
      break;
    }
    if (!a.injectivity_report.injective) {
      report.status = SolveStatus::singular_jacobian;
      report.message = "Jacobian rank deficient at iterate " + std::to_string(k);
      break;
    }

    ProxResult step;
    try {
      step = step_from_assessment(problem, x, a, cfg);
    } catch (const InnerSolverStalled& error) {
      report.status = SolveStatus::prox_failure;
      report.message = error.what();
      break;
    }
    row.step_norm = (step.point - x).norm();
    row.prox_inner_iterations = step.inner_iterations;

    if (!problem.domain.contains(step.point)) {
      report.status = SolveStatus::left_domain;
      report.message = "iterate " + std::to_string(k + 1) + " left the domain";
      break;
    }
    x = step.point;

    if (row.step_norm <= cfg.step_tolerance) {
      const Assessment final_assessment = assess(problem, x, cfg);
      report.trace.push_back(make_record(k + 1, problem, x, final_assessment));
      if (final_assessment.stationarity <= cfg.stationarity_tolerance) {
        report.status = SolveStatus::converged;
      } else {
        report.status = SolveStatus::max_iterations;
        report.message = "step stalled above the stationarity tolerance";
      }
      break;
    }
  }

  report.final_point = x;
  return report;
}

double linearization_error(const Problem& problem, const Vector& x,
                           const Vector& y) {
  const Vector fx = problem.map.evaluate(x);
  const Vector fy = problem.map.evaluate(y);
  return (fy - fx - problem.map.jacobian(x) * (y - x)).norm();
}

bool VerificationReport::all_checks_ok(double slack_tolerance) const {
  const auto ok = [&](const std::vector<double>& slacks) {
    return std::all_of(slacks.begin(), slacks.end(),
                       [&](double s) { return s >= -slack_tolerance; });
  };
  return frozen_coefficients_valid && monotone_decrease_ok &&
         stayed_in_ball_ok && ok(recursion_slacks) &&
         ok(per_step_recursion_slacks) && ok(linearization_slacks);
}

VerificationReport verify_run(const Problem& problem, const RunReport& report,
                              const MajorantModel& model,
                              const LocalConstants& consts,
                              const Vector& x_star) {
  if (x_star.size() == 0) {
    throw MissingGroundTruth("verify_run needs the reference minimizer");
  }
  VerificationReport verification;
  verification.radius = certificate(model, consts).r;

  const size_t n = report.trace.size();
  std::vector<double> sigma(n);
  for (size_t k = 0; k < n; ++k) {
    sigma[k] = (report.trace[k].point - x_star).norm();
  }
  if (n == 0) return verification;

  verification.sigma0 = sigma.front();
  verification.final_sigma = sigma.back();
  const double upper = nu(model);
  // sigma0 = 0 means the run started at the reference point; the bound
  // is vacuous there rather than violated.
  verification.frozen_coefficients_valid =
      sigma[0] == 0.0 ? n == 1 : sigma[0] < upper;

  RecursionCoefficients frozen{0.0, 0.0, 0.0};
  if (verification.frozen_coefficients_valid && sigma[0] > 0.0) {
    frozen = error_recursion_coefficients(model, consts, sigma[0]);
  }

  const double ball_tolerance = 1.0 + 1e-12;
  const double ratio_floor = 1e-13;
  const double machine_floor =
      50.0 * std::numeric_limits<double>::epsilon() * (1.0 + x_star.norm());

  for (size_t k = 0; k < n; ++k) {
    if (sigma[k] > verification.radius * ball_tolerance) {
      verification.stayed_in_ball_ok = false;
    }
    if (k + 1 == n) break;

    if (sigma[k] > 0.0 && sigma[k + 1] >= sigma[k]) {
      verification.monotone_decrease_ok = false;
    }
    if (verification.frozen_coefficients_valid) {
      const double rhs = (frozen.quad_a + frozen.quad_b) * sigma[k] * sigma[k] +
                         frozen.lin * sigma[k];
      verification.recursion_slacks.push_back(rhs - sigma[k + 1]);
    }
    if (sigma[k] > 0.0 && sigma[k] < upper) {
      const RecursionCoefficients local =
          error_recursion_coefficients(model, consts, sigma[k]);
      const double rhs = (local.quad_a + local.quad_b) * sigma[k] * sigma[k] +
                         local.lin * sigma[k];
      verification.per_step_recursion_slacks.push_back(rhs - sigma[k + 1]);

      // e_f(t, 0) = t f'(t) - f(t) bounds beta times the linearization error
      const double ef = model.remainder_ratio(sigma[k]) * sigma[k] * sigma[k];
      const double ef_observed =
          consts.beta *
          linearization_error(problem, report.trace[k].point, x_star);
      verification.linearization_slacks.push_back(ef - ef_observed);
    }
    if (sigma[k] > ratio_floor && sigma[k + 1] > machine_floor) {
      verification.quadratic_ratio_estimates.push_back(
          sigma[k + 1] / (sigma[k] * sigma[k]));
    }
  }
  return verification;
}

}  // namespace proxgn
