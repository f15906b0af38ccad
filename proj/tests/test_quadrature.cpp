#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phmgp/errors.hpp"
#include "phmgp/quadrature.hpp"

using namespace phmgp;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials up to cubic integrate exactly") {
  auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  // antiderivative x^4/4 - x^2 + x over [0, 2] -> 4 - 4 + 2
  CHECK(adaptive_simpson(cubic, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  auto quad = [](double x) { return x * x; };
  CHECK(adaptive_simpson(quad, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrands meet the relative tolerance") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
}

TEST_CASE("degenerate and reversed limits") {
  auto f = [](double x) { return std::cos(x); };
  CHECK(adaptive_simpson(f, 1.5, 1.5) == 0.0);
  double fwd = adaptive_simpson(f, 0.0, 1.0);
  double rev = adaptive_simpson(f, 1.0, 0.0);
  CHECK(rev == doctest::Approx(-fwd).epsilon(1e-14));
}

TEST_CASE("a jump discontinuity exhausts the refinement depth") {
  auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  opts.max_depth = 12;
  CHECK_THROWS_AS(adaptive_simpson(step, 0.0, 1.0, opts), QuadratureError);
}

TEST_CASE("non-finite limits are rejected") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(adaptive_simpson(f, 0.0, std::numeric_limits<double>::infinity()),
                  InvalidArgument);
}

}  // TEST_SUITE
