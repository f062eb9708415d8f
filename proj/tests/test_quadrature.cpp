#include "doctest.h"

#include <cmath>

#include "vclab/errors.hpp"
#include "vclab/quadrature.hpp"

using namespace vclab;

TEST_CASE("polynomial and elementary integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularities") {
  // int_0^1 log x = -1
  CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0) ==
        doctest::Approx(-1.0).epsilon(1e-9));
  // int_0^1 1/sqrt(x) = 2
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("interior singularity with pre-split") {
  // int_0^2 log|x-1| dx = -2
  auto f = [](double x) { return std::log(std::fabs(x - 1.0)); };
  CHECK(integrate_split(f, 0.0, 2.0, {1.0}) == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("semi-infinite transform") {
  CHECK(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // int_1^inf x^{-2} = 1
  CHECK(integrate_to_infinity([](double x) { return 1.0 / (x * x); }, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("failure reporting") {
  QuadratureOptions opts;
  opts.max_panels = 4;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-15;
  CHECK_THROWS_AS(integrate([](double x) { return std::log(x) * std::cos(50.0 * x); }, 0.0, 1.0, opts),
                  QuadratureError);
}

TEST_CASE("determinism") {
  auto f = [](double x) { return std::log(x) * std::sin(3.0 * x + 0.2); };
  const double a = integrate(f, 0.0, 2.0);
  const double b = integrate(f, 0.0, 2.0);
  CHECK(a == b);
}
