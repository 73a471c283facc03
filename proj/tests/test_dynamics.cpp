#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_1.hpp>

#include "doctest.h"
#include "isochron/dynamics.hpp"

using namespace isochron;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// x'' + x + x^3 = 0 from amplitude A: T = 4 K(k) / sqrt(1 + A^2), k^2 = A^2 / (2 (1 + A^2)).
double duffing_period(double A) {
  const double k = std::sqrt(A * A / (2.0 * (1.0 + A * A)));
  return 4.0 * boost::math::ellint_1(k) / std::sqrt(1.0 + A * A);
}

NumericSystem sys_of(const char* f, const char* g, const char* h, std::optional<Interval> d = std::nullopt) {
  return numeric(make_system(f, g, h, d));
}

Potential well(const char* h) {
  const auto ev = std::make_shared<Evaluator>(parse(h));
  return Potential([ev](double x) { return (*ev)(x); });
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("harmonic oscillator") {
    const NumericSystem sys = sys_of("0", "0", "x");
    for (double a : {0.1, 0.7, 1.5}) {
      const ReturnResult r = return_period(sys, a);
      CHECK(std::abs(r.period - kTwoPi) < 1e-10);
      CHECK(r.closure_error < 1e-9);
    }
    CHECK(std::abs(return_period(sys, -0.4).period - kTwoPi) < 1e-10);
  }

  TEST_CASE("trajectory conserves the harmonic energy") {
    const NumericSystem sys = sys_of("0", "0", "x");
    const Trajectory tr = integrate_orbit(sys, 1.0, 20.0);
    CHECK(tr.t_end() >= 20.0);
    for (std::size_t i = 0; i < tr.steps(); ++i) {
      const State& s = tr.states()[i];
      CHECK(std::abs(s[0] * s[0] + s[1] * s[1] - 1.0) < 1e-10);
    }
    const State mid = tr.at(3.3);
    CHECK(mid[0] == doctest::Approx(std::cos(3.3)).epsilon(1e-7));
    CHECK_THROWS_AS(integrate_orbit(sys, 1.0, 1.0, 1e-3), std::invalid_argument);
  }

  TEST_CASE("Duffing periods against the elliptic-integral formula") {
    const NumericSystem sys = sys_of("0", "0", "x + x^3");
    const Potential pot = well("x + x^3");
    for (double A : {0.1, 0.5, 1.0, 1.5}) {
      const double exact = duffing_period(A);
      const double c = A * A / 2.0 + std::pow(A, 4) / 4.0;
      CAPTURE(A);
      CHECK(return_period(sys, A).period == doctest::Approx(exact).epsilon(1e-10));
      CHECK(period_quadrature(pot, c) == doctest::Approx(exact).epsilon(1e-10));
      const auto [a, b] = turning_points(pot, c);
      CHECK(b == doctest::Approx(A).epsilon(1e-12));
      CHECK(a == doctest::Approx(-A).epsilon(1e-12));
    }
  }

  TEST_CASE("wells with a saddle") {
    const Potential pot = well("x + x^2");
    CHECK_THROWS_AS(turning_points(pot, 1.0 / 6.0), NoBracket);
    CHECK_THROWS_AS(turning_points(pot, 0.2), SeparatrixEnergy);
    const auto [a, b] = turning_points(pot, 0.1);
    CHECK(std::abs(pot(a) - 0.1) < 1e-13);
    CHECK(std::abs(pot(b) - 0.1) < 1e-13);
    const double T = period_quadrature(pot, 0.1);
    const double Tode = return_period(sys_of("0", "0", "x + x^2"), b).period;
    CHECK(T == doctest::Approx(Tode).epsilon(1e-9));
    CHECK(period_quadrature(pot, 1e-8) == doctest::Approx(kTwoPi).epsilon(1e-6));
  }

  TEST_CASE("escaping and spiralling orbits") {
    const NumericSystem softening = sys_of("0", "0", "x - x^3", Interval{-0.9, 0.9});
    CHECK_THROWS_AS(return_period(softening, 1.2), Escaped);

    const PeriodScan scan = period_scan(softening, {0.3, 1.2});
    CHECK(scan.rows[0].status == RowStatus::ok);
    CHECK(scan.rows[1].status == RowStatus::escaped);
    CHECK_FALSE(scan.rows[1].message.empty());

    const PeriodScan focus = period_scan(sys_of("0", "x^2", "x"), {0.5});
    CHECK(focus.rows[0].status == RowStatus::open);
    CHECK(focus.rows[0].closure_error > 1e-3);
  }

  TEST_CASE("scan summaries") {
    const NumericSystem duffing = sys_of("0", "0", "x + x^3");
    const std::vector<double> amps = {0.2, 0.4, 0.8, 1.2};
    const PeriodScan scan = period_scan(duffing, amps);
    CHECK(scan.monotonicity == Monotonicity::decreasing);
    CHECK(scan.method == "ode_return+quadrature");
    for (const ScanRow& r : scan.rows) {
      REQUIRE(r.quadrature_period);
      REQUIRE(r.energy);
      CHECK(std::abs(*r.quadrature_period - r.period) < 1e-7);
    }
    REQUIRE(scan.max_deviation);
    CHECK(*scan.max_deviation == doctest::Approx(kTwoPi - duffing_period(1.2)).epsilon(1e-8));

    const PeriodScan harmonic = period_scan(sys_of("0", "0", "x"), amps);
    CHECK(harmonic.monotonicity == Monotonicity::constant);

    std::vector<ScanRow> rows(3);
    rows[0].period = 1.0;
    rows[1].period = 3.0;
    rows[2].period = 2.0;
    CHECK(classify(rows, 1e-6) == Monotonicity::non_monotone);
    rows.resize(1);
    CHECK(classify(rows, 1e-6) == Monotonicity::undetermined);
  }

  TEST_CASE("parallel scans are deterministic") {
    const NumericSystem sys = sys_of("x/(1+x^2)", "x/2", "x + x^3");
    const std::vector<double> amps = default_amplitudes(Interval{-1.5, 1.5});
    ScanOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const PeriodScan a = period_scan(sys, amps, one), b = period_scan(sys, amps, many);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].period == b.rows[i].period);
      CHECK(a.rows[i].closure_error == b.rows[i].closure_error);
    }
  }

  TEST_CASE("default amplitudes and ladder deviation") {
    const auto amps = default_amplitudes(Interval{-1.0, 1.0});
    REQUIRE(amps.size() == 8);
    CHECK(amps.front() == doctest::Approx(0.05));
    CHECK(amps.back() == doctest::Approx(0.8));
    for (std::size_t i = 1; i < amps.size(); ++i) CHECK(amps[i] > amps[i - 1]);

    const auto d = deviation_at_largest(sys_of("0", "0", "x - x^3", Interval{-0.9, 0.9}), {1.5, 1.2, 0.5});
    REQUIRE(d);
    CHECK(d->amplitude == 0.5);
    CHECK(d->deviation > 1e-3);
  }

  TEST_CASE("string conversions") {
    CHECK(to_string(Monotonicity::non_monotone) == "non-monotone");
    CHECK(monotonicity_from_string("decreasing") == Monotonicity::decreasing);
    CHECK(row_status_from_string("no_return") == RowStatus::no_return);
    CHECK_THROWS_AS(row_status_from_string("fine"), std::invalid_argument);
  }
}
