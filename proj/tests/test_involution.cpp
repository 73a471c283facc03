#include <cmath>

#include "doctest.h"
#include "isochron/involution.hpp"

using namespace isochron;

namespace {

Potential well(const char* h) {
  const auto ev = std::make_shared<Evaluator>(parse(h));
  return Potential([ev](double x) { return (*ev)(x); });
}

}  // namespace

TEST_SUITE("involution") {
  TEST_CASE("series involution of the quadratic well") {
    const PowerSeries A = involution_series(taylor(parse("x + x^2"), 13));
    CHECK(A.order() == 12);
    CHECK(A[1] == doctest::Approx(-1.0));
    CHECK(A[2] == doctest::Approx(-2.0 / 3.0));
    CHECK(A[3] == doctest::Approx(-4.0 / 9.0));
    const PowerSeries AA = compose(A, A) - PowerSeries::identity(A.order());
    CHECK(AA.max_abs() < 1e-12);
  }

  TEST_CASE("leading-term errors") {
    CHECK_THROWS_AS(involution_series(taylor(parse("x^2"), 8)), LeadingTermError);
    CHECK_THROWS_AS(involution_series(taylor(parse("-x"), 8)), LeadingTermError);
    CHECK_THROWS_AS(involution_series(taylor(parse("1 + x"), 8)), LeadingTermError);
  }

  TEST_CASE("numeric involution reaches the saddle level exactly") {
    const Potential pot = well("x + x^2");
    const double A = involution_numeric(pot, 0.5);
    CHECK(A == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(pot(A) - 1.0 / 6.0) < 1e-12);
    CHECK(std::abs(pot(0.5) - 1.0 / 6.0) < 1e-12);

    const double a3 = involution_numeric(pot, 0.3);
    CHECK(std::abs(pot(a3) - pot(0.3)) < 1e-13);
    CHECK(a3 < -0.3);
    CHECK(involution_numeric(pot, a3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(involution_numeric(pot, 0.6), NoBracket);
  }

  TEST_CASE("series matches numeric values inside the trust radius") {
    const InvolutionTable t = build_involution_table(parse("x + x^2"), kDefaultOrder, 20);
    CHECK(t.trust_radius > 0.1);
    CHECK(t.grid.size() == 20);
    CHECK(t.series_involution_error < 1e-9);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      CAPTURE(t.grid[i]);
      CHECK(std::abs(t.series_A.eval(t.grid[i]) - t.A_values[i]) < 1e-7);
      CHECK(t.level_residuals[i] < 1e-12);
      CHECK(t.involution_errors[i] < 1e-9);
    }
    for (std::size_t i = 1; i < t.grid.size(); ++i) {
      CHECK(t.rho.eval(t.grid[i]) > t.rho.eval(t.grid[i - 1]));
    }
  }

  TEST_CASE("potential involution check") {
    const CriterionReport duffing = potential_involution_check(parse("x + x^3"), 24);
    CHECK(duffing.verdict == Verdict::fails);
    REQUIRE(duffing.first_obstruction);
    CHECK(*duffing.first_obstruction <= 3);

    const CriterionReport lin = potential_involution_check(parse("x"), 24);
    CHECK(lin.verdict == Verdict::holds);
    CHECK(lin.max_residual < 1e-14);

    CHECK(potential_involution_check(parse("x + x^2"), 24).verdict == Verdict::fails);
    CHECK_THROWS_AS(potential_involution_check(parse("2*x"), 24), NotNormalized);
  }

  TEST_CASE("weighted turning-point integral vanishes for every well") {
    for (const char* h : {"x", "x + x^3", "x + x^2"}) {
      const Potential pot = well(h);
      const WeightedIdentity wi = weighted_identity(pot, 0.1);
      CAPTURE(h);
      CHECK(wi.a < 0.0);
      CHECK(wi.b > 0.0);
      CHECK(std::abs(wi.value) < 1e-6);
    }
  }

  TEST_CASE("damping involution check") {
    CHECK(damping_involution_check(parse("x"), parse("x + x^3/9"), 24).verdict == Verdict::holds);
    const CriterionReport bad = damping_involution_check(parse("x"), parse("x + x^3"), 24);
    CHECK(bad.verdict == Verdict::fails);
    REQUIRE(bad.first_obstruction);
    CHECK(*bad.first_obstruction == 3);
    CHECK(damping_involution_check(parse("x^2"), parse("x"), 24).verdict == Verdict::inapplicable);
    CHECK(damping_involution_check(parse("-x"), parse("x"), 24).verdict == Verdict::inapplicable);
  }

  TEST_CASE("transform by the involution") {
    const auto [f, h] = transform_by_involution(parse("x"), 10);
    CHECK(f.max_abs() < 1e-14);
    CHECK(h[1] == doctest::Approx(1.0));
    CHECK(std::abs(h[2]) < 1e-14);
  }
}
