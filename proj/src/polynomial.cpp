#include "proxgn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace proxgn {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Multiplies accumulator (coefficients in s) by (a + b s)^e in place.
void multiply_binomial_power(std::vector<double>& acc, double a, double b, int e) {
  for (int rep = 0; rep < e; ++rep) {
    double carry = 0.0;
    for (double& coefficient : acc) {
      const double next_carry = coefficient * b;
      coefficient = coefficient * a + carry;
      carry = next_carry;
    }
  }
}

}  // namespace

PolynomialMap::PolynomialMap(int input_dim, int output_dim)
    : input_dim_(input_dim), output_dim_(output_dim), components_(output_dim) {
  if (input_dim <= 0 || output_dim <= 0) {
    throw DimensionMismatch("polynomial map needs positive dimensions");
  }
}

void PolynomialMap::add_term(int component, double coefficient,
                             std::vector<int> exponents) {
  if (component < 0 || component >= output_dim_) {
    throw DimensionMismatch("component index out of range");
  }
  if (static_cast<int>(exponents.size()) != input_dim_) {
    throw DimensionMismatch("exponent list length must equal input_dim");
  }
  for (int e : exponents) {
    if (e < 0) throw DomainError("exponents must be nonnegative");
  }
  components_[component].push_back(Monomial{coefficient, std::move(exponents)});
}

int PolynomialMap::total_degree() const {
  int degree = 0;
  for (const auto& terms : components_) {
    for (const Monomial& term : terms) {
      degree = std::max(degree, std::accumulate(term.exponents.begin(),
                                                term.exponents.end(), 0));
    }
  }
  return degree;
}

Vector PolynomialMap::evaluate(const Vector& x) const {
  if (x.size() != input_dim_) {
    throw DimensionMismatch("point dimension does not match input_dim");
  }
  Vector out = Vector::Zero(output_dim_);
  for (int component = 0; component < output_dim_; ++component) {
    double sum = 0.0;
    for (const Monomial& term : components_[component]) {
      double value = term.coefficient;
      for (int i = 0; i < input_dim_; ++i) value *= ipow(x(i), term.exponents[i]);
      sum += value;
    }
    out(component) = sum;
  }
  return out;
}

Matrix PolynomialMap::jacobian(const Vector& x) const {
  if (x.size() != input_dim_) {
    throw DimensionMismatch("point dimension does not match input_dim");
  }
  Matrix jac = Matrix::Zero(output_dim_, input_dim_);
  for (int component = 0; component < output_dim_; ++component) {
    for (const Monomial& term : components_[component]) {
      for (int j = 0; j < input_dim_; ++j) {
        const int e = term.exponents[j];
        if (e == 0) continue;
        double value = term.coefficient * e * ipow(x(j), e - 1);
        for (int i = 0; i < input_dim_; ++i) {
          if (i != j) value *= ipow(x(i), term.exponents[i]);
        }
        jac(component, j) += value;
      }
    }
  }
  return jac;
}

Matrix PolynomialMap::directional_expansion(const Vector& center,
                                            const Vector& direction) const {
  if (center.size() != input_dim_ || direction.size() != input_dim_) {
    throw DimensionMismatch("expansion point dimension does not match input_dim");
  }
  const int degree = total_degree();
  Matrix expansion = Matrix::Zero(output_dim_, degree + 1);
  std::vector<double> acc;
  for (int component = 0; component < output_dim_; ++component) {
    for (const Monomial& term : components_[component]) {
      acc.assign(static_cast<size_t>(degree) + 1, 0.0);
      acc[0] = term.coefficient;
      for (int i = 0; i < input_dim_; ++i) {
        multiply_binomial_power(acc, center(i), direction(i), term.exponents[i]);
      }
      for (int j = 0; j <= degree; ++j) expansion(component, j) += acc[j];
    }
  }
  return expansion;
}

double tensor_norm_estimate(const PolynomialMap& map, const Vector& center,
                            int order, int samples, unsigned seed) {
  if (order < 1) throw DomainError("tensor order must be >= 1");
  if (order > map.total_degree()) return 0.0;

  const int dim = map.input_dim();
  const auto objective = [&](const Vector& u) {
    return map.directional_expansion(center, u).col(order).norm();
  };

  double best_value = -1.0;
  Vector best_direction = Vector::Unit(dim, 0);
  const auto consider = [&](const Vector& u) {
    const double value = objective(u);
    if (value > best_value) {
      best_value = value;
      best_direction = u;
    }
  };

  if (dim == 1) {
    consider(Vector::Constant(1, 1.0));
    consider(Vector::Constant(1, -1.0));
  } else if (dim == 2) {
    for (int k = 0; k < samples; ++k) {
      const double angle = 2.0 * M_PI * k / samples;
      Vector u(2);
      u << std::cos(angle), std::sin(angle);
      consider(u);
    }
  } else if (dim == 3) {
    // spherical Fibonacci lattice
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < samples; ++k) {
      const double y = 1.0 - 2.0 * (k + 0.5) / samples;
      const double radius = std::sqrt(std::max(0.0, 1.0 - y * y));
      const double angle = golden * k;
      Vector u(3);
      u << radius * std::cos(angle), y, radius * std::sin(angle);
      consider(u);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < samples; ++k) {
      Vector u(dim);
      for (int i = 0; i < dim; ++i) u(i) = normal(rng);
      const double n = u.norm();
      if (n > 0.0) consider(u / n);
    }
  }

  // Coordinate ascent on the sphere around the best sampled direction.
  double step = 0.05;
  while (step > 1e-10) {
    bool improved = false;
    for (int i = 0; i < dim; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector u = best_direction;
        u(i) += sign * step;
        u.normalize();
        const double value = objective(u);
        if (value > best_value) {
          best_value = value;
          best_direction = u;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

}  // namespace proxgn
