#pragma once

#include <limits>
#include <string>

#include "proxgn/errors.hpp"

namespace proxgn {

/// Scalar majorant f for the derivative variation of the residual map:
/// beta ||F'(x) - F'(x* + tau (x - x*))|| <= f'(sigma(x)) - f'(tau sigma(x)).
///
/// Two instances ship:
///   lipschitz(L): f(t) = L t^2 / 2 - t           on [0, +inf)
///   smale(g):     f(t) = t / (1 - g t) - 2 t     on [0, 1/g)
///
/// Both satisfy f(0) = 0, f'(0) = -1 and have convex, strictly
/// increasing f' (for L > 0). lipschitz(0) is the degenerate model of
/// an affine residual: f' is constantly -1 and every derived radius is
/// unbounded.
class MajorantModel {
 public:
  enum class Kind { lipschitz, smale };

  static MajorantModel lipschitz(double L);
  /// Requires gamma > 0: with gamma = 0 the change of variables behind
  /// the quartic radius degenerates. Throws DegenerateModel.
  static MajorantModel smale(double gamma);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }

  double value(double t) const;       // f(t)
  double derivative(double t) const;  // f'(t)

  /// f'(t) - f'(u), evaluated in product form so nearby arguments do
  /// not cancel.
  double derivative_gap(double t, double u) const;

  /// (t f'(t) - f(t)) / t^2, the scaled Taylor remainder of f at 0;
  /// stable for t near 0 where the direct difference loses digits.
  double remainder_ratio(double t) const;

  /// (f'(t) + 1) / t = (f'(t) - f'(0)) / t, stable for t near 0.
  double slope_ratio(double t) const;

  /// D+ f'(0): L for the Lipschitz model, 2 gamma for the Smale model.
  double derivative_gap_limit() const;

  /// Upper end of the domain of f (+inf for Lipschitz, 1/gamma for Smale).
  double domain_bound() const;

  std::string kind_name() const;

 private:
  MajorantModel(Kind kind, double parameter)
      : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

/// Constants of the problem at the reference stationary point x*:
/// c = ||F(x*)||, beta = ||F'(x*)^+||, kappa = beta ||F'(x*)||, and
/// delta = sup{t in [0, R): B(x*, t) inside the domain}.
struct LocalConstants {
  double c;
  double beta;
  double kappa;
  double delta;
};

enum class RadiusMethod { generic_bisection, lipschitz_closed_form, smale_quartic };

struct RadiusCertificate {
  double nu;
  double rho;
  double r;
  double h_value;
  bool h_ok;
  RadiusMethod method;
  double cross_check_delta;  // relative gap between closed form and bisection
};

struct RecursionCoefficients {
  double quad_a;  // multiplies sigma_k^2 (curvature part)
  double quad_b;  // multiplies sigma_k^2 (residual part)
  double lin;     // multiplies sigma_k
};

/// h = [(1 + sqrt(2)) kappa + 1] c beta D+f'(0); the certificate exists
/// only when h < 1.
double condition_h(const MajorantModel& model, const LocalConstants& consts);

/// nu = sup{t >= 0 : f'(t) < 0}.
double nu(const MajorantModel& model);

/// Contraction bound Q(t) whose unit crossing defines rho; requires
/// 0 < t < nu.
double contraction_q(const MajorantModel& model, const LocalConstants& consts,
                     double t);

/// rho = sup{t in (0, nu) : Q(t) < 1}, located by bisection (Q is
/// increasing on (0, nu)). Returns nu * (1 - 1e-12) when Q stays below
/// one on the whole interval.
double rho_generic(const MajorantModel& model, const LocalConstants& consts);

/// Closed-form rho for the Lipschitz model.
double rho_lipschitz(const LocalConstants& consts, double L);

/// rho for the Smale model via the sign change of the quartic
///   p(s) = -4 s^4 + (1 - kappa + a + b(kappa-1)) s^3
///        + (3 + kappa + a + b(kappa-1)) s^2 + (b - 1) s + b,
/// a = gamma c beta, b = (1 + sqrt(2)) gamma c beta, on (sqrt(2)/2, 1);
/// rho = (1 - s_bar) / gamma.
double rho_smale(const LocalConstants& consts, double gamma);

/// Assembles nu, rho, r = min(rho, delta). The closed form is always
/// cross-checked against the generic bisection (when nu is finite);
/// disagreement beyond 1e-8 relative raises CrossCheckMismatch.
RadiusCertificate certificate(const MajorantModel& model,
                              const LocalConstants& consts);

/// Coefficients of the one-step error bound
///   sigma_{k+1} <= (quad_a + quad_b) sigma_k^2 + lin sigma_k
/// evaluated at t (typically frozen at t = sigma(x_0)); 0 < t < nu.
RecursionCoefficients error_recursion_coefficients(const MajorantModel& model,
                                                   const LocalConstants& consts,
                                                   double t);

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace proxgn
