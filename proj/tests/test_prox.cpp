#include <doctest.h>

#include "oracles.hpp"
#include "proxgn/prox.hpp"

using namespace proxgn;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ProxSpec random_spec(oracles::Rng& rng, int n, int kind) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (kind == 0) return ProxSpec::zero();
  if (kind == 1) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = 2.0 * uniform(rng);
    return ProxSpec::weighted_l1(w);
  }
  Vector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * uniform(rng) - 1.0;
    lo(i) = a - uniform(rng);
    hi(i) = a + uniform(rng);
  }
  return ProxSpec::box(lo, hi);
}

}  // namespace

TEST_CASE("zero penalty prox is the identity") {
  const Vector z = vec2(1.0, 2.0);
  oracles::Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix H = oracles::random_spd(rng, 2, 100.0);
    const ProxResult r = prox(ProxSpec::zero(), H, z, 1e-12);
    CHECK((r.point - z).norm() == doctest::Approx(0.0));
    CHECK(r.envelope_value == doctest::Approx(0.0));
    CHECK(r.inner_iterations == 0);
  }
}

TEST_CASE("weighted l1 prox closed forms") {
  SUBCASE("identity metric soft threshold") {
    const ProxResult r = prox(ProxSpec::weighted_l1(vec2(1, 1)),
                              Matrix::Identity(2, 2), vec2(2.0, -0.5), 1e-12);
    CHECK(r.point(0) == doctest::Approx(1.0));
    CHECK(r.point(1) == doctest::Approx(0.0));
  }
  SUBCASE("diagonal metric rescales the threshold") {
    Matrix H(2, 2);
    H << 2, 0, 0, 1;
    const ProxResult r =
        prox(ProxSpec::weighted_l1(vec2(1, 1)), H, vec2(2.0, 2.0), 1e-12);
    CHECK(r.point(0) == doctest::Approx(1.5));
    CHECK(r.point(1) == doctest::Approx(1.0));
  }
  SUBCASE("grid-search cross-check") {
    const auto J = [](const Vector& x) { return x.cwiseAbs().sum(); };
    const Vector z = vec2(2.0, -0.5);
    const Vector expected = oracles::grid_search_prox_2d(
        J, Matrix::Identity(2, 2), z, -3.0, 3.0, 600);
    const ProxResult r =
        prox(ProxSpec::weighted_l1(vec2(1, 1)), Matrix::Identity(2, 2), z, 1e-12);
    CHECK((r.point - expected).cwiseAbs().maxCoeff() < 2e-2);
  }
}

TEST_CASE("box prox clamps componentwise under a diagonal metric") {
  Matrix H(2, 2);
  H << 3, 0, 0, 1;
  const ProxSpec box = ProxSpec::box(vec2(-1, 0), vec2(1, 2));
  const ProxResult r = prox(box, H, vec2(4.0, -3.0), 1e-12);
  CHECK(r.point(0) == doctest::Approx(1.0));
  CHECK(r.point(1) == doctest::Approx(0.0));
  CHECK(penalty_value(box, r.point) == 0.0);
}

TEST_CASE("prox rejects bad metrics") {
  const Vector z = vec2(1, 1);
  SUBCASE("indefinite") {
    Matrix H(2, 2);
    H << 1, 0, 0, -1;
    CHECK_THROWS_AS(prox(ProxSpec::zero(), H, z, 1e-10), HNotPositiveDefinite);
  }
  SUBCASE("asymmetric") {
    Matrix H(2, 2);
    H << 1, 0.5, 0, 1;
    CHECK_THROWS_AS(prox(ProxSpec::zero(), H, z, 1e-10), HNotPositiveDefinite);
  }
  SUBCASE("singular") {
    Matrix H(2, 2);
    H << 1, 0, 0, 0;
    CHECK_THROWS_AS(prox(ProxSpec::weighted_l1(vec2(1, 1)), H, z, 1e-10),
                    HNotPositiveDefinite);
  }
}

TEST_CASE("iterative and closed-form paths agree on diagonal metrics") {
  oracles::Rng rng(33);
  std::uniform_real_distribution<double> uniform(0.1, 3.0);
  const double tol = 1e-10;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    Matrix H = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) H(i, i) = uniform(rng);
    const Vector z = oracles::random_vector(rng, n, 2.0);
    for (int kind : {1, 2}) {
      const ProxSpec spec = random_spec(rng, n, kind);
      const ProxResult closed = prox(spec, H, z, tol);
      const ProxResult iterative = prox_iterative(spec, H, z, tol);
      CAPTURE(trial);
      CAPTURE(kind);
      REQUIRE((closed.point - iterative.point).norm() <= 10.0 * tol);
      REQUIRE(closed.inner_iterations == 0);
      REQUIRE(iterative.inner_iterations > 0);
    }
  }
}

TEST_CASE("prox satisfies its first-order optimality residual") {
  oracles::Rng rng(77);
  const double tol = 1e-9;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const Matrix H = oracles::random_spd(rng, n, 50.0);
    const Vector z = oracles::random_vector(rng, n, 2.0);
    const ProxSpec spec = random_spec(rng, n, trial % 3);
    const ProxResult r = prox(spec, H, z, tol);
    const double scale = std::max(1.0, spectral_norm(H) * z.norm());
    CAPTURE(trial);
    REQUIRE(subdifferential_distance(spec, r.point, H * (z - r.point)) <=
            tol * scale);
    REQUIRE(r.inner_residual <= tol * scale);
    // taking x = z in the infimum bounds the envelope by J(z)
    const double at_z = penalty_value(spec, z);
    if (std::isfinite(at_z)) REQUIRE(r.envelope_value <= at_z + 1e-12);
  }
}

TEST_CASE("prox is nonexpansive in the metric norm") {
  oracles::Rng rng(99);
  const double tol = 1e-10;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Matrix H = oracles::random_spd(rng, n, 30.0);
    const Vector z1 = oracles::random_vector(rng, n, 2.0);
    const Vector z2 = oracles::random_vector(rng, n, 2.0);
    const ProxSpec spec = random_spec(rng, n, trial % 3);
    const Vector p1 = prox(spec, H, z1, tol).point;
    const Vector p2 = prox(spec, H, z2, tol).point;
    const auto h_norm = [&](const Vector& v) { return std::sqrt(v.dot(H * v)); };
    CAPTURE(trial);
    REQUIRE(h_norm(p1 - p2) <= h_norm(z1 - z2) + 1e-6);
  }
}

TEST_CASE("envelope value is monotone under tolerance tightening") {
  oracles::Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix H = oracles::random_spd(rng, 3, 20.0);
    const Vector z = oracles::random_vector(rng, 3, 2.0);
    const ProxSpec spec = random_spec(rng, 3, 1 + trial % 2);
    const double loose = prox_iterative(spec, H, z, 1e-4).envelope_value;
    const double tight = prox_iterative(spec, H, z, 1e-11).envelope_value;
    CHECK(tight <= loose + 1e-9);
  }
}

TEST_CASE("two-metric bound on hand-checked cases") {
  const Matrix I = Matrix::Identity(2, 2);
  SUBCASE("identical inputs") {
    const TwoMetricReport r =
        check_two_metric_bound(ProxSpec::zero(), I, I, vec2(1, 2), vec2(1, 2));
    CHECK(r.lhs == doctest::Approx(0.0));
    CHECK(r.rhs == doctest::Approx(0.0));
  }
  SUBCASE("unit shift with the identity metric") {
    const TwoMetricReport r =
        check_two_metric_bound(ProxSpec::zero(), I, I, vec2(1, 0), vec2(0, 0));
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.slack == doctest::Approx(0.0));
  }
  SUBCASE("weighted l1 with distinct metrics") {
    Matrix H1(2, 2);
    H1 << 2, 0, 0, 1;
    const TwoMetricReport r = check_two_metric_bound(
        ProxSpec::weighted_l1(vec2(1, 1)), H1, I, vec2(2, 2), vec2(2, 2));
    CHECK(r.slack >= 0.0);
  }
}

TEST_CASE("two-metric bound holds on random instances") {
  oracles::Rng rng(2718);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Matrix H1 = oracles::random_spd(rng, n, 40.0);
    const Matrix H2 = oracles::random_spd(rng, n, 40.0);
    const Vector z1 = oracles::random_vector(rng, n, 2.0);
    const Vector z2 = oracles::random_vector(rng, n, 2.0);
    const ProxSpec spec = random_spec(rng, n, trial % 3);
    const TwoMetricReport r = check_two_metric_bound(spec, H1, H2, z1, z2, 1e-10);
    CAPTURE(trial);
    REQUIRE(r.slack >= -1e-6);
  }
}

TEST_CASE("subdifferential distances") {
  SUBCASE("zero penalty") {
    CHECK(subdifferential_distance(ProxSpec::zero(), vec2(1, 2), vec2(0, 0)) ==
          doctest::Approx(0.0));
    CHECK(subdifferential_distance(ProxSpec::zero(), vec2(1, 2), vec2(3, 4)) ==
          doctest::Approx(5.0));
  }
  SUBCASE("weighted l1 inside the interval at zero") {
    Vector w(1), x(1), g(1);
    w << 1.0;
    x << 0.0;
    g << 0.5;
    CHECK(subdifferential_distance(ProxSpec::weighted_l1(w), x, g) ==
          doctest::Approx(0.0));
  }
  SUBCASE("weighted l1 away from zero") {
    Vector w(1), x(1), g(1);
    w << 1.0;
    x << 2.0;
    g << 0.3;
    CHECK(subdifferential_distance(ProxSpec::weighted_l1(w), x, g) ==
          doctest::Approx(0.7));
  }
  SUBCASE("box normal cones") {
    const ProxSpec box = ProxSpec::box(vec2(0, 0), vec2(1, 1));
    CHECK(subdifferential_distance(box, vec2(0.5, 0.5), vec2(0.2, -0.3)) ==
          doctest::Approx(std::sqrt(0.04 + 0.09)));
    CHECK(subdifferential_distance(box, vec2(1.0, 0.5), vec2(2.0, 0.0)) ==
          doctest::Approx(0.0));
    CHECK(subdifferential_distance(box, vec2(0.0, 0.5), vec2(-2.0, 0.0)) ==
          doctest::Approx(0.0));
    CHECK(subdifferential_distance(box, vec2(0.0, 0.5), vec2(2.0, 0.0)) ==
          doctest::Approx(2.0));
    CHECK(subdifferential_distance(box, vec2(2.0, 0.5), vec2(0.0, 0.0)) ==
          proxgn::infinity());
  }
}

TEST_CASE("exhausted inner iteration budget raises InnerSolverStalled") {
  oracles::Rng rng(14);
  const Matrix H = oracles::random_spd(rng, 3, 50.0);
  const Vector z = oracles::random_vector(rng, 3, 2.0);
  const ProxSpec spec = ProxSpec::weighted_l1(Vector::Constant(3, 0.5));
  CHECK_THROWS_AS(prox_iterative(spec, H, z, 1e-12, 2), InnerSolverStalled);
}

TEST_CASE("prox of an infeasible box point lands in the box") {
  const ProxSpec box = ProxSpec::box(vec2(0, 0), vec2(1, 1));
  oracles::Rng rng(4);
  const Matrix H = oracles::random_spd(rng, 2, 10.0);
  const ProxResult r = prox(box, H, vec2(5.0, -5.0), 1e-10);
  CHECK(penalty_value(box, r.point) == 0.0);
}
