#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxgn/majorant.hpp"
#include "proxgn/polynomial.hpp"
#include "proxgn/prox.hpp"

namespace proxgn {

/// Feasible set Omega. whole_space(R) is all of R^n with R acting only
/// as the cap on the ball radius delta; ball(center, radius) is an open
/// Euclidean ball.
class Domain {
 public:
  enum class Kind { whole_space, ball };

  static Domain whole_space(double R);
  static Domain ball(Vector center, double radius);

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  const Vector& center() const { return center_; }

  bool contains(const Vector& x) const;

  /// sup{t in [0, R): B(x_ref, t) inside Omega}; for an off-center ball
  /// this is the inscribed radius radius - ||center - x_ref||.
  double inscribed_radius(const Vector& x_ref) const;

 private:
  Domain(Kind kind, double radius, Vector center)
      : kind_(kind), radius_(radius), center_(std::move(center)) {}
  Kind kind_;
  double radius_;
  Vector center_;
};

struct Problem {
  std::string name;
  PolynomialMap map;
  ProxSpec penalty;
  Domain domain;
  std::optional<Vector> known_minimizer;
  std::optional<double> known_lipschitz;
  std::optional<double> known_gamma;
};

/// Local constants plus the majorant parameter (L or gamma) for one
/// model kind. parameter_is_estimate marks sampled values, as opposed
/// to declared ground truth.
struct ModelConstants {
  LocalConstants constants;
  double parameter;
  bool parameter_is_estimate;
};

/// Extracts c, beta, kappa, delta at the declared minimizer together
/// with the model parameter. Lipschitz L falls back to a sampled
/// two-point estimate, Smale gamma to directional tensor norms
///   gamma = max_{2 <= n <= degree} (beta ||F^(n)(x*)/n!||)^(1/(n-1)),
/// whenever the problem does not declare them. delta is capped by the
/// majorant domain bound (1/gamma for the Smale model).
ModelConstants local_constants(const Problem& problem, MajorantModel::Kind kind);

/// Builds the majorant model matching local_constants(problem, kind).
MajorantModel model_for(const Problem& problem, MajorantModel::Kind kind);

/// Built-in verification problems with known minimizers and declared
/// majorant parameters.
std::vector<Problem> catalog();

/// Looks up a catalog entry by name; throws ConfigError listing the
/// known names when absent.
Problem catalog_problem(const std::string& name);

}  // namespace proxgn
