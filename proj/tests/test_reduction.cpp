#include <cmath>
#include <memory>

#include "doctest.h"
#include "isochron/dynamics.hpp"
#include "isochron/reduction.hpp"

using namespace isochron;

namespace {

SystemSpec rational_system() {
  return make_system("2*x/(1+x^2)", "x/(1+x^2)", "(x + x^3/3 + 3*x^3*(1+x^2/5)^2/(3+x^2)^3)/(1+x^2)",
                     Interval{-0.9, 0.9});
}

std::shared_ptr<const LienardChart> chart_of(const SystemSpec& sys) {
  const NumericSystem n = numeric(sys);
  return std::make_shared<LienardChart>(n.f, n.g, sys.domain);
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("f = 0 leaves the system unchanged") {
    const ReducedLienard red = reduce(make_system("0", "x", "x + x^3/9"), 12);
    CHECK(red.y_of_x[1] == 1.0);
    CHECK(red.y_of_x[3] == 0.0);
    CHECK(red.g_tilde[1] == doctest::Approx(1.0));
    CHECK(red.h_tilde[3] == doctest::Approx(1.0 / 9.0));
    CHECK(red.defining_residual < 1e-14);
  }

  TEST_CASE("rational damping: e^F = 1 + x^2 and y = x + x^3/3") {
    const ReducedLienard red = reduce(rational_system(), 16);
    CHECK(red.expF[0] == doctest::Approx(1.0));
    CHECK(red.expF[2] == doctest::Approx(1.0));
    for (int k = 3; k <= 16; ++k) CHECK(std::abs(red.expF[k]) < 1e-13);
    CHECK(red.y_of_x[1] == doctest::Approx(1.0));
    CHECK(red.y_of_x[3] == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(red.y_of_x[5]) < 1e-13);
    CHECK(red.G_tilde[2] == doctest::Approx(0.5));
    CHECK(red.h_tilde[3] == doctest::Approx(1.0 / 9.0));
    CHECK(red.defining_residual < 1e-12);
  }

  TEST_CASE("unnormalized systems are rejected") {
    CHECK_THROWS_AS(reduce(make_system("0", "0", "2*x"), 8), NotNormalized);
    CHECK_THROWS_AS(reduce(make_system("1", "0", "x"), 8), NotNormalized);
  }

  TEST_CASE("numeric chart map and its inverse") {
    const SystemSpec sys = rational_system();
    const double x = 0.5;
    CHECK(y_numeric(sys, x) == doctest::Approx(x + x * x * x / 3.0).epsilon(1e-13));
    CHECK(u_numeric(sys, x + x * x * x / 3.0) == doctest::Approx(x).epsilon(1e-12));
  }

  TEST_CASE("piecewise chart against closed forms") {
    const SystemSpec sys = rational_system();
    const auto chart = chart_of(sys);
    for (double x : {-0.85, -0.3, 0.0, 0.2, 0.7}) {
      CHECK(chart->F(x) == doctest::Approx(std::log1p(x * x)).epsilon(1e-13));
      CHECK(chart->y(x) == doctest::Approx(x + x * x * x / 3.0).epsilon(1e-13));
      CHECK(chart->K(x) == doctest::Approx(std::pow(x, 3) / 3.0 + std::pow(x, 5) / 15.0).epsilon(1e-12));
      CHECK(chart->u(chart->y(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(chart->u(2.0), OutOfDomain);
  }

  TEST_CASE("reduced numeric system agrees with the original one") {
    const SystemSpec sys = make_system("x", "0", "x");
    const auto chart = chart_of(sys);
    const NumericSystem reduced = reduced_numeric(sys, chart);
    const double x0 = 0.5;
    const double T_orig = return_period(numeric(sys), x0).period;
    const double T_red = return_period(reduced, chart->y(x0)).period;
    CHECK(T_red == doctest::Approx(T_orig).epsilon(1e-9));
    CHECK(std::abs(T_orig - 2.0 * M_PI) > 1e-3);
    CHECK(reduced.g_zero);
  }
}
