#include <doctest.h>

#include <cmath>

#include "proxgn/bisection.hpp"

using proxgn::bisect;
using proxgn::BisectionOptions;
using proxgn::BisectionResult;

TEST_CASE("bisection locates roots of monotone functions") {
  BisectionOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-14;

  SUBCASE("increasing crossing") {
    const auto f = [](double t) { return t * t - 2.0; };
    const BisectionResult r = bisect(f, 0.0, 2.0, -1, opt);
    CHECK(r.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("decreasing crossing with positive left sign") {
    const auto f = [](double t) { return 1.0 - t * t * t; };
    const BisectionResult r = bisect(f, 0.0, 2.0, +1, opt);
    CHECK(r.root == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("left endpoint is never evaluated") {
    const auto f = [](double t) { return std::log(t) + 1.0; };  // singular at 0
    const BisectionResult r = bisect(f, 0.0, 1.0, -1, opt);
    CHECK(r.root == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
}

TEST_CASE("bisection respects its budgets") {
  SUBCASE("iteration cap") {
    BisectionOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 0.0;
    opt.max_iterations = 5;
    const auto f = [](double t) { return t - 0.3; };
    const BisectionResult r = bisect(f, 0.0, 1.0, -1, opt);
    CHECK(r.iterations == 5);
    CHECK(std::abs(r.root - 0.3) <= 1.0 / 32.0);
  }
  SUBCASE("interval collapse at machine precision") {
    BisectionOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 0.0;
    opt.max_iterations = 200;
    const auto f = [](double t) { return t - 1.0 / 3.0; };
    const BisectionResult r = bisect(f, 0.0, 1.0, -1, opt);
    CHECK(r.root == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.iterations < 200);
  }
  SUBCASE("exact zero stops immediately") {
    const auto f = [](double t) { return t - 0.5; };
    const BisectionResult r = bisect(f, 0.0, 1.0, -1, BisectionOptions{});
    CHECK(r.root == 0.5);
    CHECK(r.iterations == 1);
  }
}
