#pragma once

#include <vector>

#include "proxgn/linalg.hpp"

namespace proxgn {

/// coefficient * prod_i x_i^exponents[i]
struct Monomial {
  double coefficient;
  std::vector<int> exponents;
};

/// A polynomial map F : R^n -> R^m stored as sparse monomial lists per
/// output component. Evaluation, the analytic Jacobian, and directional
/// Taylor expansions are exact up to floating point.
class PolynomialMap {
 public:
  PolynomialMap(int input_dim, int output_dim);

  void add_term(int component, double coefficient, std::vector<int> exponents);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  int total_degree() const;

  Vector evaluate(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

  /// Coefficients of s^j in F(center + s * direction): an
  /// output_dim x (total_degree + 1) matrix. Column j holds the j-th
  /// directional Taylor term, i.e. F^(j)(center)[u,...,u] / j!.
  Matrix directional_expansion(const Vector& center, const Vector& direction) const;

  const std::vector<std::vector<Monomial>>& components() const {
    return components_;
  }

 private:
  int input_dim_;
  int output_dim_;
  std::vector<std::vector<Monomial>> components_;
};

/// Estimates ||F^(order)(center) / order!|| as the supremum over unit
/// directions u of ||coefficient of s^order in F(center + s u)||, which
/// coincides with the symmetric multilinear operator norm. Directions
/// are sampled deterministically (dense for input_dim <= 3, seeded
/// random otherwise) and the best one is refined by coordinate ascent.
double tensor_norm_estimate(const PolynomialMap& map, const Vector& center,
                            int order, int samples = 20000,
                            unsigned seed = 20240501u);

}  // namespace proxgn
