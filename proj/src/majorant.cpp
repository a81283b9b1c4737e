#include "proxgn/majorant.hpp"

#include <algorithm>
#include <cmath>

#include "proxgn/bisection.hpp"

namespace proxgn {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_constants(const LocalConstants& consts) {
  if (!(consts.c >= 0.0)) throw DomainError("c must be >= 0");
  if (!(consts.beta > 0.0)) throw DomainError("beta must be > 0");
  if (!(consts.kappa > 0.0)) throw DomainError("kappa must be > 0");
  if (!(consts.delta > 0.0)) throw DomainError("delta must be > 0");
}

double require_h_below_one(const MajorantModel& model,
                           const LocalConstants& consts) {
  const double h = condition_h(model, consts);
  if (!(h < 1.0)) throw H3Violated(h);
  return h;
}

}  // namespace

MajorantModel MajorantModel::lipschitz(double L) {
  if (!(L >= 0.0)) throw DegenerateModel("Lipschitz model needs L >= 0");
  return MajorantModel(Kind::lipschitz, L);
}

MajorantModel MajorantModel::smale(double gamma) {
  if (!(gamma > 0.0)) throw DegenerateModel("Smale model needs gamma > 0");
  return MajorantModel(Kind::smale, gamma);
}

double MajorantModel::value(double t) const {
  if (!(t >= 0.0 && t < domain_bound())) {
    throw DomainError("majorant evaluated outside [0, R)");
  }
  if (kind_ == Kind::lipschitz) return 0.5 * parameter_ * t * t - t;
  return t / (1.0 - parameter_ * t) - 2.0 * t;
}

double MajorantModel::derivative(double t) const {
  if (!(t >= 0.0 && t < domain_bound())) {
    throw DomainError("majorant derivative evaluated outside [0, R)");
  }
  if (kind_ == Kind::lipschitz) return parameter_ * t - 1.0;
  const double s = 1.0 - parameter_ * t;
  return 1.0 / (s * s) - 2.0;
}

double MajorantModel::derivative_gap(double t, double u) const {
  if (!(t >= 0.0 && t < domain_bound()) || !(u >= 0.0 && u < domain_bound())) {
    throw DomainError("derivative gap evaluated outside [0, R)");
  }
  if (kind_ == Kind::lipschitz) return parameter_ * (t - u);
  const double st = 1.0 - parameter_ * t;
  const double su = 1.0 - parameter_ * u;
  return parameter_ * (t - u) * (su + st) / (st * st * su * su);
}

double MajorantModel::remainder_ratio(double t) const {
  if (!(t > 0.0 && t < domain_bound())) {
    throw DomainError("remainder ratio defined on (0, R)");
  }
  if (kind_ == Kind::lipschitz) return 0.5 * parameter_;
  const double s = 1.0 - parameter_ * t;
  return parameter_ / (s * s);
}

double MajorantModel::slope_ratio(double t) const {
  if (!(t > 0.0 && t < domain_bound())) {
    throw DomainError("slope ratio defined on (0, R)");
  }
  if (kind_ == Kind::lipschitz) return parameter_;
  const double s = 1.0 - parameter_ * t;
  return parameter_ * (1.0 + s) / (s * s);
}

double MajorantModel::derivative_gap_limit() const {
  return kind_ == Kind::lipschitz ? parameter_ : 2.0 * parameter_;
}

double MajorantModel::domain_bound() const {
  if (kind_ == Kind::lipschitz) return infinity();
  return 1.0 / parameter_;
}

std::string MajorantModel::kind_name() const {
  return kind_ == Kind::lipschitz ? "lipschitz" : "smale";
}

double condition_h(const MajorantModel& model, const LocalConstants& consts) {
  require_constants(consts);
  return ((1.0 + kSqrt2) * consts.kappa + 1.0) * consts.c * consts.beta *
         model.derivative_gap_limit();
}

double nu(const MajorantModel& model) {
  if (model.kind() == MajorantModel::Kind::lipschitz) {
    return model.parameter() == 0.0 ? infinity() : 1.0 / model.parameter();
  }
  return (2.0 - kSqrt2) / (2.0 * model.parameter());
}

double contraction_q(const MajorantModel& model, const LocalConstants& consts,
                     double t) {
  require_constants(consts);
  if (!(t > 0.0 && t < nu(model))) {
    throw DomainError("contraction bound defined on (0, nu)");
  }
  const double fp = model.derivative(t);
  const double fv = model.value(t);
  const double cb = consts.c * consts.beta;
  const double numerator =
      (fp + 1.0 + consts.kappa) *
          (t * fp - fv + cb * (1.0 + kSqrt2) * (fp + 1.0)) +
      cb * (fp + 1.0);
  return numerator / (t * fp * fp);
}

double rho_generic(const MajorantModel& model, const LocalConstants& consts) {
  require_h_below_one(model, consts);
  const double upper = nu(model);
  if (!std::isfinite(upper)) return infinity();  // affine residual: no constraint

  const double hi = upper * (1.0 - 1e-12);
  if (contraction_q(model, consts, hi) < 1.0) return hi;

  // Q increases from h < 1 on (0, nu), so the unit crossing is unique.
  const auto crossing = [&](double t) {
    return contraction_q(model, consts, t) - 1.0;
  };
  BisectionOptions options;
  options.abs_tol = 1e-14 * upper;
  options.rel_tol = 1e-12;
  return bisect(crossing, 0.0, hi, -1, options).root;
}

double rho_lipschitz(const LocalConstants& consts, double L) {
  require_constants(consts);
  if (!(L >= 0.0)) throw DegenerateModel("Lipschitz model needs L >= 0");
  const double h = ((1.0 + kSqrt2) * consts.kappa + 1.0) * consts.c * consts.beta * L;
  if (!(h < 1.0)) throw H3Violated(h);
  if (L == 0.0) return infinity();
  const double u =
      4.0 + consts.kappa + 2.0 * consts.c * (1.0 + kSqrt2) * consts.beta * L;
  // (u - sqrt(u^2 - 8(1-h))) / (2L), written to avoid cancellation
  return 4.0 * (1.0 - h) / (L * (u + std::sqrt(u * u - 8.0 * (1.0 - h))));
}

double rho_smale(const LocalConstants& consts, double gamma) {
  require_constants(consts);
  if (!(gamma > 0.0)) throw DegenerateModel("Smale model needs gamma > 0");
  const double h =
      2.0 * consts.c * gamma * consts.beta * ((1.0 + kSqrt2) * consts.kappa + 1.0);
  if (!(h < 1.0)) throw H3Violated(h);

  const double a = gamma * consts.c * consts.beta;
  const double b = (1.0 + kSqrt2) * gamma * consts.c * consts.beta;
  const double kappa = consts.kappa;
  const auto quartic = [&](double s) {
    return -4.0 * s * s * s * s +
           (1.0 - kappa + a + b * (kappa - 1.0)) * s * s * s +
           (3.0 + kappa + a + b * (kappa - 1.0)) * s * s + (b - 1.0) * s + b;
  };

  const double lo = 0.5 * kSqrt2;
  double s_bar;
  if (quartic(lo) <= 0.0) {
    s_bar = lo;  // p < 0 on the whole interval; the infimum is the endpoint
  } else {
    // p decreases across the interval and p(1) = h - 1 < 0.
    BisectionOptions options;
    options.abs_tol = 1e-16;
    options.rel_tol = 1e-14;
    s_bar = bisect(quartic, lo, 1.0, +1, options).root;
  }
  return (1.0 - s_bar) / gamma;
}

RadiusCertificate certificate(const MajorantModel& model,
                              const LocalConstants& consts) {
  RadiusCertificate cert;
  cert.h_value = require_h_below_one(model, consts);
  cert.h_ok = true;
  cert.nu = nu(model);

  if (model.kind() == MajorantModel::Kind::lipschitz) {
    cert.rho = rho_lipschitz(consts, model.parameter());
    cert.method = RadiusMethod::lipschitz_closed_form;
  } else {
    cert.rho = rho_smale(consts, model.parameter());
    cert.method = RadiusMethod::smale_quartic;
  }

  cert.cross_check_delta = 0.0;
  if (std::isfinite(cert.nu)) {
    const double rho_bisect = rho_generic(model, consts);
    cert.cross_check_delta =
        std::abs(rho_bisect - cert.rho) / std::max(cert.rho, 1e-300);
    if (cert.cross_check_delta > 1e-8) {
      throw CrossCheckMismatch(
          "closed-form rho " + std::to_string(cert.rho) +
          " disagrees with bisection " + std::to_string(rho_bisect));
    }
  }

  cert.r = std::min(cert.rho, consts.delta);
  return cert;
}

RecursionCoefficients error_recursion_coefficients(const MajorantModel& model,
                                                   const LocalConstants& consts,
                                                   double t) {
  require_constants(consts);
  if (!(t > 0.0 && t < nu(model))) {
    throw DomainError("recursion coefficients defined on (0, nu)");
  }
  const double fp = model.derivative(t);
  const double fv = model.value(t);
  const double tfp = t * fp;
  const double cb = consts.c * consts.beta;

  RecursionCoefficients k;
  k.quad_a = (fp + 1.0 + consts.kappa) * (tfp - fv) / (tfp * tfp);
  k.quad_b = (1.0 + kSqrt2) * cb * (fp + 1.0) * (fp + 1.0) / (tfp * tfp);
  k.lin = cb * ((1.0 + kSqrt2) * consts.kappa + 1.0) * (fp + 1.0) / (t * fp * fp);
  return k;
}

}  // namespace proxgn
