#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "phmgp/errors.hpp"
#include "phmgp/kernels.hpp"

using namespace phmgp;

TEST_SUITE("kernels") {

TEST_CASE("squared exponential at matching and unit-separated inputs") {
  SeParams p{1.0, 1.0, 0.0};
  CHECK(kernel_se(0.0, 0.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_se(0.0, 1.0, p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(kernel_se(3.0, 3.0, SeParams{2.0, 0.7, 0.0}) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("noise attaches to shared observation indices only") {
  SeParams p{1.0, 1.0, 0.5};
  // equal coordinates from distinct observations stay noise-free
  CHECK(kernel_se(2.0, 2.0, p, false) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_se(2.0, 2.0, p, true) == doctest::Approx(1.25).epsilon(1e-15));
  PolyKernelParams pp{1, 1.0, 1.0, 0.5};
  CHECK(kernel_poly(2.0, 2.0, pp, false) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(kernel_poly(2.0, 2.0, pp, true) == doctest::Approx(5.25).epsilon(1e-15));
}

TEST_CASE("polynomial kernel frozen value") {
  PolyKernelParams p{2, 1.5, 0.3, 0.0};
  CHECK(kernel_poly(0.5, 2.0, p) == doctest::Approx(3.8025).epsilon(1e-15));
}

TEST_CASE("kernels are exactly symmetric in their inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  SeParams se{1.3, 0.8, 0.0};
  PolyKernelParams po{3, 0.9, 0.4, 0.0};
  for (int i = 0; i < 200; ++i) {
    double x = unif(rng), xp = unif(rng);
    CHECK(kernel_se(x, xp, se) == kernel_se(xp, x, se));
    CHECK(kernel_poly(x, xp, po) == kernel_poly(xp, x, po));
  }
}

TEST_CASE("polynomial mean uses the constant-first coefficient layout") {
  std::vector<double> c{1.0, 2.0, 3.0};
  CHECK(mean_poly(0.0, c) == doctest::Approx(1.0));
  CHECK(mean_poly(2.0, c) == doctest::Approx(1.0 + 4.0 + 12.0));
  CHECK(mean_poly_deriv(2.0, c) == doctest::Approx(2.0 + 12.0));
  std::vector<double> constant{4.5};
  CHECK(mean_poly(100.0, constant) == doctest::Approx(4.5));
  CHECK(mean_poly_deriv(100.0, constant) == doctest::Approx(0.0));
}

TEST_CASE("invalid inputs are rejected") {
  double nan = std::numeric_limits<double>::quiet_NaN();
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(kernel_se(nan, 0.0, SeParams{}), InvalidArgument);
  CHECK_THROWS_AS(kernel_se(0.0, inf, SeParams{}), InvalidArgument);
  CHECK_THROWS_AS(kernel_poly(0.0, 0.0, PolyKernelParams{0, 1.0, 1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(mean_poly(1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(mean_poly(nan, std::vector<double>{1.0}), InvalidArgument);
}

}  // TEST_SUITE
