#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nehari/analytic.hpp"

using namespace nehari;

TEST_CASE("half-period constant reduces to pi at r = 2", "[analytic]") {
  REQUIRE(pi_r(2.0) == Catch::Approx(kPi).epsilon(1e-14));
  REQUIRE(exact_lambda1(2.0, 1.0) == Catch::Approx(kPi * kPi).epsilon(1e-14));
}

TEST_CASE("shooting oracle matches the closed form", "[analytic]") {
  for (double r : {1.5, 2.0, 3.0, 5.0}) {
    const double shot = shoot_lambda1(r, 1.0);
    const double exact = exact_lambda1(r, 1.0);
    INFO("r = " << r);
    REQUIRE(std::fabs(shot - exact) / exact < 1e-5);
  }
}

TEST_CASE("eigenvalue scales with the domain length", "[analytic]") {
  const double r = 3.0;
  // lambda1(r, L) = lambda1(r, 1) / L^r
  REQUIRE(exact_lambda1(r, 2.0) ==
          Catch::Approx(exact_lambda1(r, 1.0) / std::pow(2.0, r))
              .epsilon(1e-14));
  const double shot = shoot_lambda1(r, 2.0);
  REQUIRE(std::fabs(shot - exact_lambda1(r, 2.0)) / exact_lambda1(r, 2.0) <
          1e-5);
}

TEST_CASE("shooting profile reproduces the sine at r = 2", "[analytic]") {
  const int m = 31;
  const double lambda = kPi * kPi;
  std::vector<double> prof = shoot_profile(2.0, 1.0, lambda, m);
  // the shooting solution with u'(0) = 1 is sin(pi x) / pi
  for (int i = 0; i < m; ++i) {
    const double x = (i + 1) / static_cast<double>(m + 1);
    REQUIRE(prof[i] == Catch::Approx(std::sin(kPi * x) / kPi).margin(1e-6));
  }
}

TEST_CASE("analytic oracle input validation", "[analytic]") {
  REQUIRE_THROWS_AS(pi_r(1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(exact_lambda1(0.5, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(exact_lambda1(2.0, -1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(shoot_lambda1(1.0, 1.0), std::invalid_argument);
}
