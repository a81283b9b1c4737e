#pragma once

#include <variant>

#include "proxgn/linalg.hpp"

namespace proxgn {

/// Convex penalties with componentwise structure. Box bounds may be
/// +-infinity; the indicator is +infinity outside the box.
struct ZeroPenalty {};

struct WeightedL1 {
  Vector weights;  // nonnegative, one per coordinate
};

struct BoxIndicator {
  Vector lower;
  Vector upper;
};

class ProxSpec {
 public:
  enum class Kind { zero, weighted_l1, box };

  static ProxSpec zero() { return ProxSpec(ZeroPenalty{}); }
  static ProxSpec weighted_l1(Vector weights);
  static ProxSpec box(Vector lower, Vector upper);

  Kind kind() const;

  /// Coordinate count fixed by the parameters, or -1 for the zero
  /// penalty (which applies in any dimension).
  Eigen::Index dimension() const;

  const WeightedL1& as_weighted_l1() const { return std::get<WeightedL1>(data_); }
  const BoxIndicator& as_box() const { return std::get<BoxIndicator>(data_); }

 private:
  template <class T>
  explicit ProxSpec(T value) : data_(std::move(value)) {}
  std::variant<ZeroPenalty, WeightedL1, BoxIndicator> data_;
};

/// J(x); +infinity for an infeasible point of a box indicator.
double penalty_value(const ProxSpec& spec, const Vector& x);

struct ProxResult {
  Vector point;
  double envelope_value;   // J(p) + 1/2 ||p - z||_H^2 at the returned point
  int inner_iterations;    // 0 on closed-form paths
  double inner_residual;   // first-order residual at the returned point
};

/// Proximity operator of J in the metric of a symmetric positive
/// definite H: argmin_x J(x) + 1/2 ||x - z||_H^2.
///
/// Closed forms are used when they exist (zero penalty; weighted l1 or
/// box with diagonal H); everything else runs an accelerated
/// forward-backward inner solver with step 1/||H|| until the
/// first-order residual drops below tol * max(1, ||H|| ||z||).
ProxResult prox(const ProxSpec& spec, const Matrix& H, const Vector& z,
                double tol, int max_inner_iterations = 10000);

/// Always runs the inner forward-backward solver, even where a closed
/// form exists. Used to cross-check the dispatch paths against each other.
ProxResult prox_iterative(const ProxSpec& spec, const Matrix& H, const Vector& z,
                          double tol, int max_inner_iterations = 10000);

/// Euclidean distance from g to the subdifferential of J at x
/// (+infinity when x is infeasible for a box indicator).
double subdifferential_distance(const ProxSpec& spec, const Vector& x,
                                const Vector& g);

struct TwoMetricReport {
  double lhs;    // ||prox_H1(z1) - prox_H2(z2)||
  double rhs;    // sqrt(||H1|| ||H1^-1||) ||z1-z2|| + ||H1^-1|| ||(H1-H2)(z2 - prox_H2(z2))||
  double slack;  // rhs - lhs
};

/// Evaluates both sides of the metric-change bound for proximity
/// operators under two SPD metrics.
TwoMetricReport check_two_metric_bound(const ProxSpec& spec, const Matrix& H1,
                                       const Matrix& H2, const Vector& z1,
                                       const Vector& z2, double tol = 1e-10);

}  // namespace proxgn
