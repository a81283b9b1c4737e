#include "proxgn/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace proxgn {

namespace {

/// Sampled lower estimate of the best Lipschitz constant of t -> beta F'(x(t))
/// along segments through x*, inflated slightly to make it usable as an
/// upper bound in practice.
double estimate_lipschitz(const Problem& problem, const Vector& x_star,
                          double beta, double delta) {
  std::mt19937_64 rng(911u);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int dim = problem.map.input_dim();

  double best = 0.0;
  for (int sample = 0; sample < 400; ++sample) {
    Vector direction(dim);
    for (int i = 0; i < dim; ++i) direction(i) = normal(rng);
    if (direction.norm() == 0.0) continue;
    direction.normalize();
    const double sigma = uniform(rng) * 0.99 * delta;
    const double tau = uniform(rng);
    if (sigma * (1.0 - tau) < 1e-12) continue;
    const Vector x = x_star + sigma * direction;
    const Vector y = x_star + tau * sigma * direction;
    const double variation =
        beta * spectral_norm(problem.map.jacobian(x) - problem.map.jacobian(y));
    best = std::max(best, variation / ((1.0 - tau) * sigma));
  }
  return best * (1.0 + 1e-6);
}

double compute_gamma(const Problem& problem, const Vector& x_star, double beta) {
  const int degree = problem.map.total_degree();
  double gamma = 0.0;
  for (int order = 2; order <= degree; ++order) {
    const double norm = tensor_norm_estimate(problem.map, x_star, order);
    if (norm <= 0.0) continue;
    gamma = std::max(gamma, std::pow(beta * norm, 1.0 / (order - 1)));
  }
  return gamma;
}

}  // namespace

Domain Domain::whole_space(double R) {
  if (!(R > 0.0)) throw DomainError("whole-space radius cap must be positive");
  return Domain(Kind::whole_space, R, Vector());
}

Domain Domain::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  return Domain(Kind::ball, radius, std::move(center));
}

bool Domain::contains(const Vector& x) const {
  if (kind_ == Kind::whole_space) return true;
  if (x.size() != center_.size()) {
    throw DimensionMismatch("point dimension does not match domain");
  }
  return (x - center_).norm() < radius_;
}

double Domain::inscribed_radius(const Vector& x_ref) const {
  if (kind_ == Kind::whole_space) return radius_;
  const double slack = radius_ - (x_ref - center_).norm();
  if (slack <= 0.0) {
    throw DomainError("reference point lies outside the domain ball");
  }
  return slack;
}

ModelConstants local_constants(const Problem& problem, MajorantModel::Kind kind) {
  if (!problem.known_minimizer.has_value()) {
    throw MissingGroundTruth("problem '" + problem.name +
                             "' has no declared minimizer");
  }
  const Vector& x_star = *problem.known_minimizer;
  const Matrix jac = problem.map.jacobian(x_star);
  const SvdFactors factors = svd(jac);
  const double sigma_max = factors.singulars.size() > 0 ? factors.singulars(0) : 0.0;
  const InjectivityReport inj =
      injectivity(jac, default_rank_tolerance(jac, sigma_max));
  if (!inj.injective) {
    throw NotInjectiveAtMinimizer("F'(x*) is not injective for problem '" +
                                  problem.name + "'");
  }

  ModelConstants result;
  result.constants.c = problem.map.evaluate(x_star).norm();
  result.constants.beta = 1.0 / inj.smallest_singular;
  result.constants.kappa = sigma_max / inj.smallest_singular;

  const double geometric_delta = problem.domain.inscribed_radius(x_star);

  if (kind == MajorantModel::Kind::lipschitz) {
    if (problem.known_lipschitz.has_value()) {
      result.parameter = *problem.known_lipschitz;
      result.parameter_is_estimate = false;
    } else {
      result.parameter = estimate_lipschitz(problem, x_star,
                                            result.constants.beta,
                                            geometric_delta);
      result.parameter_is_estimate = true;
    }
    result.constants.delta = geometric_delta;
  } else {
    if (problem.known_gamma.has_value()) {
      result.parameter = *problem.known_gamma;
      result.parameter_is_estimate = false;
    } else {
      result.parameter = compute_gamma(problem, x_star, result.constants.beta);
      result.parameter_is_estimate = true;
    }
    if (!(result.parameter > 0.0)) {
      throw DegenerateModel("Smale model needs gamma > 0; problem '" +
                            problem.name + "' has gamma = " +
                            std::to_string(result.parameter));
    }
    result.constants.delta = std::min(geometric_delta, 1.0 / result.parameter);
  }
  return result;
}

MajorantModel model_for(const Problem& problem, MajorantModel::Kind kind) {
  const ModelConstants mc = local_constants(problem, kind);
  return kind == MajorantModel::Kind::lipschitz
             ? MajorantModel::lipschitz(mc.parameter)
             : MajorantModel::smale(mc.parameter);
}

std::vector<Problem> catalog() {
  std::vector<Problem> problems;

  {
    PolynomialMap map(1, 1);
    map.add_term(0, 1.0, {1});
    map.add_term(0, -2.0, {0});
    Vector x_star(1);
    x_star << 2.0;
    problems.push_back(Problem{"linear1d", map, ProxSpec::zero(),
                               Domain::whole_space(10.0), x_star, 0.0, 0.0});
  }

  {
    PolynomialMap map(1, 1);
    map.add_term(0, 1.0, {1});
    map.add_term(0, -2.0, {0});
    Vector x_star(1), w(1);
    x_star << 1.0;
    w << 1.0;
    problems.push_back(Problem{"softthresh1d", map, ProxSpec::weighted_l1(w),
                               Domain::whole_space(10.0), x_star, 0.0, 0.0});
  }

  {
    PolynomialMap map(1, 1);
    map.add_term(0, 1.0, {1});
    map.add_term(0, -2.0, {0});
    Vector x_star(1), lo(1), hi(1);
    x_star << 1.0;
    lo << 0.0;
    hi << 1.0;
    problems.push_back(Problem{"box1d", map, ProxSpec::box(lo, hi),
                               Domain::whole_space(10.0), x_star, 0.0, 0.0});
  }

  const auto make_quad2d_map = [] {
    PolynomialMap map(2, 3);
    map.add_term(0, 1.0, {1, 0});
    map.add_term(1, 1.0, {0, 1});
    map.add_term(2, 1.0, {2, 0});
    map.add_term(2, 1.0, {0, 2});
    return map;
  };

  {
    Vector x_star = Vector::Zero(2);
    problems.push_back(Problem{"quad2d", make_quad2d_map(), ProxSpec::zero(),
                               Domain::whole_space(0.9), x_star, 2.0, 1.0});
  }

  {
    Vector x_star = Vector::Zero(2);
    Vector w = Vector::Constant(2, 0.05);
    problems.push_back(Problem{"quad2d-l1", make_quad2d_map(),
                               ProxSpec::weighted_l1(w),
                               Domain::whole_space(0.9), x_star, 2.0, 1.0});
  }

  {
    PolynomialMap map(2, 2);
    map.add_term(0, 10.0, {0, 1});
    map.add_term(0, -10.0, {2, 0});
    map.add_term(1, 1.0, {0, 0});
    map.add_term(1, -1.0, {1, 0});
    Vector x_star(2);
    x_star << 1.0, 1.0;
    // F'(x) - F'(y) moves only through the -20 x_1 entry, so the exact
    // majorant parameters are L = 20 beta and gamma = 10 beta.
    const double beta = 1.0 / Eigen::JacobiSVD<Matrix>(map.jacobian(x_star))
                                  .singularValues()
                                  .minCoeff();
    problems.push_back(Problem{"rosenbrock-res", map, ProxSpec::zero(),
                               Domain::ball(x_star, 0.5), x_star, 20.0 * beta,
                               10.0 * beta});
  }

  {
    PolynomialMap map(1, 2);
    map.add_term(0, 1.0, {1});
    map.add_term(1, 1.0, {2});
    map.add_term(1, 0.1, {0});
    Vector x_star = Vector::Zero(1);
    problems.push_back(Problem{"quartic1d", map, ProxSpec::zero(),
                               Domain::whole_space(0.4), x_star, 2.0, 1.0});
  }

  return problems;
}

Problem catalog_problem(const std::string& name) {
  std::vector<Problem> problems = catalog();
  for (Problem& problem : problems) {
    if (problem.name == name) return std::move(problem);
  }
  std::string known;
  for (const Problem& problem : problems) {
    if (!known.empty()) known += ", ";
    known += problem.name;
  }
  throw ConfigError("unknown catalog problem '" + name + "' (known: " + known +
                    ")");
}

}  // namespace proxgn
