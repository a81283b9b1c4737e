#include <doctest.h>

#include "oracles.hpp"
#include "proxgn/problem.hpp"

using namespace proxgn;

TEST_CASE("domains") {
  SUBCASE("whole space contains everything and caps delta at R") {
    const Domain domain = Domain::whole_space(10.0);
    CHECK(domain.contains(Vector::Constant(3, 1e9)));
    CHECK(domain.inscribed_radius(Vector::Zero(3)) == doctest::Approx(10.0));
  }
  SUBCASE("centered ball") {
    Vector center(2);
    center << 1.0, 1.0;
    const Domain domain = Domain::ball(center, 0.5);
    CHECK(domain.contains(center));
    CHECK_FALSE(domain.contains(Vector::Zero(2)));
    CHECK(domain.inscribed_radius(center) == doctest::Approx(0.5));
  }
  SUBCASE("off-center ball uses the inscribed radius") {
    Vector center(2), x_ref(2);
    center << 1.0, 0.0;
    x_ref << 0.7, 0.0;
    const Domain domain = Domain::ball(center, 0.5);
    CHECK(domain.inscribed_radius(x_ref) == doctest::Approx(0.2));
    Vector outside(2);
    outside << 0.0, 0.0;
    CHECK_THROWS_AS(domain.inscribed_radius(outside), DomainError);
  }
}

TEST_CASE("catalog contents") {
  const std::vector<Problem> problems = catalog();
  CHECK(problems.size() >= 5);
  for (const char* name : {"linear1d", "softthresh1d", "quad2d", "quad2d-l1",
                           "rosenbrock-res"}) {
    CHECK_NOTHROW(catalog_problem(name));
  }
  CHECK_THROWS_AS(catalog_problem("no-such-problem"), ConfigError);

  for (const Problem& problem : problems) {
    REQUIRE(problem.known_minimizer.has_value());
    REQUIRE(problem.domain.contains(*problem.known_minimizer));
    REQUIRE(problem.known_lipschitz.has_value());
    REQUIRE(problem.known_gamma.has_value());
  }
}

TEST_CASE("rosenbrock residual values at the minimizer") {
  const Problem problem = catalog_problem("rosenbrock-res");
  const Vector x_star = *problem.known_minimizer;
  CHECK(problem.map.evaluate(x_star).norm() == doctest::Approx(0.0));
  const Matrix jac = problem.map.jacobian(x_star);
  Matrix expected(2, 2);
  expected << -20, 10, -1, 0;
  CHECK((jac - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(injectivity(jac, 1e-12).injective);
}

TEST_CASE("local constants of the hand-checked problems") {
  SUBCASE("affine residual") {
    const Problem problem = catalog_problem("linear1d");
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::lipschitz);
    CHECK(mc.constants.c == doctest::Approx(0.0));
    CHECK(mc.constants.beta == doctest::Approx(1.0));
    CHECK(mc.constants.kappa == doctest::Approx(1.0));
    CHECK(mc.constants.delta == doctest::Approx(10.0));
    CHECK(mc.parameter == 0.0);
    CHECK_FALSE(mc.parameter_is_estimate);
  }
  SUBCASE("soft-threshold fixed point with nonzero residual") {
    const Problem problem = catalog_problem("softthresh1d");
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::lipschitz);
    CHECK(mc.constants.c == doctest::Approx(1.0));
    CHECK(mc.constants.beta == doctest::Approx(1.0));
    CHECK(mc.constants.kappa == doctest::Approx(1.0));
    const Vector x_star = *problem.known_minimizer;
    const Vector g = -(problem.map.jacobian(x_star).transpose() *
                       problem.map.evaluate(x_star));
    CHECK(g(0) == doctest::Approx(1.0));
    CHECK(subdifferential_distance(problem.penalty, x_star, g) ==
          doctest::Approx(0.0));
  }
  SUBCASE("quadratic map") {
    const Problem problem = catalog_problem("quad2d");
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::smale);
    CHECK(mc.constants.c == doctest::Approx(0.0));
    CHECK(mc.constants.beta == doctest::Approx(1.0));
    CHECK(mc.constants.kappa == doctest::Approx(1.0));
    CHECK(mc.parameter == doctest::Approx(1.0));
    CHECK(mc.constants.delta == doctest::Approx(0.9));  // min(0.9, 1/gamma)
  }
  SUBCASE("smale delta is capped by the model domain bound") {
    const Problem problem = catalog_problem("rosenbrock-res");
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::smale);
    CHECK(mc.constants.delta == doctest::Approx(1.0 / mc.parameter));
    CHECK(mc.constants.delta < 0.5);
  }
  SUBCASE("kappa is consistent with the two norms") {
    for (const Problem& problem : catalog()) {
      const ModelConstants mc =
          local_constants(problem, MajorantModel::Kind::lipschitz);
      const Matrix jac = problem.map.jacobian(*problem.known_minimizer);
      const double product = mc.constants.beta * spectral_norm(jac);
      REQUIRE(std::abs(mc.constants.kappa - product) <=
              1e-10 * std::max(1.0, product));
    }
  }
}

TEST_CASE("parameter estimation fallbacks") {
  SUBCASE("estimated gamma matches the declared one for the quadratic map") {
    Problem problem = catalog_problem("quad2d");
    problem.known_gamma.reset();
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::smale);
    CHECK(mc.parameter_is_estimate);
    CHECK(mc.parameter == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("estimated lipschitz constant is close to the declared one") {
    Problem problem = catalog_problem("quad2d");
    problem.known_lipschitz.reset();
    const ModelConstants mc =
        local_constants(problem, MajorantModel::Kind::lipschitz);
    CHECK(mc.parameter_is_estimate);
    CHECK(mc.parameter == doctest::Approx(2.0).epsilon(1e-2));
  }
  SUBCASE("linear residual degrades the smale model") {
    Problem problem = catalog_problem("linear1d");
    CHECK_THROWS_AS(local_constants(problem, MajorantModel::Kind::smale),
                    DegenerateModel);
  }
}

TEST_CASE("errors for unusable ground truth") {
  PolynomialMap square(1, 1);
  square.add_term(0, 1.0, {2});
  SUBCASE("missing minimizer") {
    Problem problem{"anon", square, ProxSpec::zero(), Domain::whole_space(1.0),
                    std::nullopt, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(local_constants(problem, MajorantModel::Kind::lipschitz),
                    MissingGroundTruth);
  }
  SUBCASE("singular jacobian at the minimizer") {
    Problem problem{"anon", square, ProxSpec::zero(), Domain::whole_space(1.0),
                    Vector::Zero(1), std::nullopt, std::nullopt};
    CHECK_THROWS_AS(local_constants(problem, MajorantModel::Kind::lipschitz),
                    NotInjectiveAtMinimizer);
  }
}

TEST_CASE("stationarity holds at every catalog minimizer") {
  for (const Problem& problem : catalog()) {
    const Vector& x_star = *problem.known_minimizer;
    const Vector g = -(problem.map.jacobian(x_star).transpose() *
                       problem.map.evaluate(x_star));
    CAPTURE(problem.name);
    REQUIRE(subdifferential_distance(problem.penalty, x_star, g) <= 1e-10);
  }
}

TEST_CASE("jacobians match central differences on the catalog") {
  oracles::Rng rng(55);
  for (const Problem& problem : catalog()) {
    const Vector& x_star = *problem.known_minimizer;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = problem.map.input_dim();
      const Vector x = x_star + 0.3 * oracles::random_vector(rng, n);
      const Matrix analytic = problem.map.jacobian(x);
      Matrix numeric(problem.map.output_dim(), n);
      for (int j = 0; j < n; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(x(j)));
        Vector lo = x, hi = x;
        lo(j) -= h;
        hi(j) += h;
        numeric.col(j) = (problem.map.evaluate(hi) - problem.map.evaluate(lo)) /
                         (2.0 * h);
      }
      CAPTURE(problem.name);
      REQUIRE((analytic - numeric).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("declared majorant parameters dominate the derivative variation") {
  oracles::Rng rng(66);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const Problem& problem : catalog()) {
    for (const auto kind :
         {MajorantModel::Kind::lipschitz, MajorantModel::Kind::smale}) {
      if (kind == MajorantModel::Kind::smale && *problem.known_gamma == 0.0) {
        continue;
      }
      const ModelConstants mc = local_constants(problem, kind);
      const MajorantModel model = kind == MajorantModel::Kind::lipschitz
                                      ? MajorantModel::lipschitz(mc.parameter)
                                      : MajorantModel::smale(mc.parameter);
      const double radius =
          std::min(nu(model), mc.constants.delta) * (1.0 - 1e-9);
      const Vector& x_star = *problem.known_minimizer;
      for (int trial = 0; trial < 100; ++trial) {
        const int n = problem.map.input_dim();
        const double sigma = uniform(rng) * radius;
        const double tau = uniform(rng);
        const Vector direction = oracles::random_unit_vector(rng, n);
        const Vector x = x_star + sigma * direction;
        const double lhs =
            mc.constants.beta *
            spectral_norm(problem.map.jacobian(x) -
                          problem.map.jacobian(x_star + tau * (x - x_star)));
        const double rhs =
            sigma == 0.0 ? 0.0 : model.derivative_gap(sigma, tau * sigma);
        CAPTURE(problem.name);
        CAPTURE(model.kind_name());
        REQUIRE(rhs - lhs >= -1e-10);
      }
    }
  }
}

TEST_CASE("second derivative bound for the quadratic map") {
  // beta ||F''(x)|| <= 2 gamma / (1 - gamma sigma)^3 on B(x*, 1/gamma)
  const Problem problem = catalog_problem("quad2d");
  const double gamma = *problem.known_gamma;
  oracles::Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = 0.99 * oracles::random_unit_vector(rng, 2) *
                     (trial / 50.0) / gamma;
    const double hessian_norm = 2.0 * tensor_norm_estimate(problem.map, x, 2);
    const double sigma = x.norm();
    REQUIRE(hessian_norm <=
            2.0 * gamma / std::pow(1.0 - gamma * sigma, 3) + 1e-10);
  }
}
