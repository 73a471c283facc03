#include <cmath>
#include <random>

#include "doctest.h"
#include "isochron/criteria.hpp"

using namespace isochron;

namespace {

ReducedLienard reduced(const char* f, const char* g, const char* h, int order = kDefaultOrder) {
  return reduce_padded(make_system(f, g, h), order);
}

// h~ = y + K^2/y^3 with K = \int_0^y xi g~.
PowerSeries odd_relation_h(const PowerSeries& g_tilde) {
  const PowerSeries y = PowerSeries::identity(g_tilde.order());
  const PowerSeries K = integrate(y * g_tilde);
  const PowerSeries K2 = K * K;
  return y.truncated(K2.order() - 3) + shift_down(K2, 3);
}

}  // namespace

TEST_SUITE("criteria") {
  TEST_CASE("center check") {
    const CriterionReport duffing = center_check(make_system("0", "0", "x + x^3"));
    CHECK(duffing.verdict == Verdict::holds);

    const CriterionReport focus = center_check(make_system("0", "x^2", "x"));
    CHECK(focus.verdict == Verdict::fails);
    REQUIRE(focus.first_obstruction);
    CHECK(*focus.first_obstruction == 3);
    CHECK(std::abs(focus.residuals[3]) == doctest::Approx(1.0 / 3.0));

    CHECK(center_check(make_system("0", "x", "x + x^3")).verdict == Verdict::holds);
    CHECK_THROWS_AS(center_check(make_system("0", "0", "2*x")), NotNormalized);
  }

  TEST_CASE("isochronous cubic Lienard system passes every check with zero residual") {
    const ReducedLienard red = reduced("0", "x", "x + x^3/9");
    for (const CriterionReport& r : {s_relation_check(red, 24), odd_relation_check(red, 24), recurrence_check(red, 24),
                                     differential_identity_check(red, 24)}) {
      CAPTURE(to_string(r.criterion_id));
      CHECK(r.verdict == Verdict::holds);
      CHECK(r.max_residual < 1e-14);
    }
    CHECK(zero_damping_check(red, 24).verdict == Verdict::inapplicable);
  }

  TEST_CASE("detuned cubic Lienard system fails at the first nonlinear order") {
    const ReducedLienard red = reduced("0", "x", "x + x^3");
    for (const CriterionReport& r : {s_relation_check(red, 24), odd_relation_check(red, 24), recurrence_check(red, 24)}) {
      CAPTURE(to_string(r.criterion_id));
      CHECK(r.verdict == Verdict::fails);
      REQUIRE(r.first_obstruction);
      CHECK(*r.first_obstruction == 3);
      CHECK(std::abs(r.residuals[3]) == doctest::Approx(8.0 / 9.0));
    }
    const CriterionReport d = differential_identity_check(red, 24);
    CHECK(d.verdict == Verdict::fails);
    REQUIRE(d.first_obstruction);
    CHECK(*d.first_obstruction == 2);
    CHECK(std::abs(d.residuals[2]) == doctest::Approx(8.0 / 3.0));
  }

  TEST_CASE("Duffing: zero-damping and s-relation checks fail") {
    const ReducedLienard red = reduced("0", "0", "x + x^3");
    const CriterionReport z = zero_damping_check(red, 24);
    CHECK(z.verdict == Verdict::fails);
    REQUIRE(z.first_obstruction);
    CHECK(*z.first_obstruction == 2);

    const CriterionReport s = s_relation_check(red, 24);
    CHECK(s.verdict == Verdict::fails);
    REQUIRE(s.first_obstruction);
    CHECK(*s.first_obstruction == 3);
    CHECK(std::abs(s.residuals[3]) == doctest::Approx(0.25));

    const ReducedLienard lin = reduced("0", "0", "x");
    CHECK(zero_damping_check(lin, 24).verdict == Verdict::holds);
    CHECK(s_relation_check(lin, 24).verdict == Verdict::holds);
  }

  TEST_CASE("solve_s") {
    SUBCASE("odd damping gives s = y") {
      std::mt19937_64 rng(11);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        PowerSeries g(kDefaultOrder + kOrderPadding);
        g[1] = 0.5 + 0.5 * std::abs(u(rng));
        for (int k = 3; k <= 9; k += 2) g[k] = u(rng);
        const ReducedLienard red = reduce_series(PowerSeries(g.order()), g, PowerSeries::identity(g.order()));
        const PowerSeries s = solve_s(red);
        const PowerSeries y = PowerSeries::identity(s.order());
        for (int k = 0; k <= kDefaultOrder; ++k) CHECK(std::abs(s[k] - y[k]) < 1e-12);
      }
    }
    SUBCASE("zero damping gives sqrt(2 H~)") {
      const ReducedLienard red = reduced("0", "0", "x + x^3");
      const PowerSeries s = solve_s(red);
      CHECK(s[1] == doctest::Approx(1.0));
      CHECK(s[3] == doctest::Approx(0.25));
    }
    SUBCASE("degenerate leading term is inapplicable") {
      const ReducedLienard red = reduced("0", "x^2", "x");
      CHECK_THROWS_AS(solve_s(red), Inapplicable);
      CHECK(s_relation_check(red, 24).verdict == Verdict::inapplicable);
    }
  }

  TEST_CASE("quadratic damping in s: asymmetric damping fails the s relation") {
    const ReducedLienard red = reduced("0", "x + x^2", "x");
    const CriterionReport r = s_relation_check(red, 24);
    CHECK(r.verdict == Verdict::fails);
  }

  TEST_CASE("recurrence coefficients") {
    const PowerSeries y = PowerSeries::identity(12);
    const auto a = recurrence_coefficients(y, 9);
    CHECK(a[1] == 1.0);
    CHECK(a[3] == doctest::Approx(1.0 / 9.0));
    CHECK(a[5] == 0.0);
    const auto printed = recurrence_coefficients(y, 9, RecurrenceVariant::printed);
    CHECK(printed[3] == doctest::Approx(1.0 / 3.0));

    const PowerSeries y3 = pow(y, 3);
    const auto b = recurrence_coefficients(y3, 9);
    CHECK(b[5] == 0.0);
    CHECK(b[7] == doctest::Approx(1.0 / 25.0));
  }

  TEST_CASE("corrected recurrence reproduces the odd relation; printed variant does not") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      PowerSeries g(40);
      g[1] = 1.0;
      for (int k = 3; k <= 9; k += 2) g[k] = u(rng);
      const PowerSeries h = odd_relation_h(g);
      const auto a = recurrence_coefficients(g, 30);
      for (int k = 0; k <= 30; ++k) CHECK(std::abs(h[k] - a[static_cast<std::size_t>(k)]) < 1e-12);
    }
    const ReducedLienard red = reduce_series(PowerSeries(40), PowerSeries::identity(40), odd_relation_h(PowerSeries::identity(40)));
    CHECK(recurrence_check(red, 30).verdict == Verdict::holds);
    const CriterionReport printed = recurrence_check(red, 30, {}, RecurrenceVariant::printed);
    CHECK(printed.verdict == Verdict::fails);
    REQUIRE(printed.first_obstruction);
    CHECK(*printed.first_obstruction == 3);
  }

  TEST_CASE("gating") {
    CHECK(odd_relation_check(reduced("x^2", "x", "x"), 12).verdict == Verdict::inapplicable);
    CHECK(odd_relation_check(reduced("x", "x^2", "x + x^2"), 12).verdict == Verdict::inapplicable);
    CHECK(recurrence_check(reduced("0", "x^2", "x + x^2"), 12).verdict == Verdict::inapplicable);
    CHECK(differential_identity_check(reduced("0", "x^2", "x + x^2"), 12).verdict == Verdict::inapplicable);
  }

  TEST_CASE("generate_h") {
    const GeneratedH lin = generate_h(parse("0"), parse("x"), 12);
    CHECK(lin.series[1] == doctest::Approx(1.0));
    CHECK(lin.series[3] == doctest::Approx(1.0 / 9.0));
    CHECK(std::abs(lin.series[5]) < 1e-14);
    CHECK(lin.eval(0.7) == doctest::Approx(0.7 + std::pow(0.7, 3) / 9.0).epsilon(1e-12));

    const GeneratedH rat = generate_h(parse("2*x/(1+x^2)"), parse("x/(1+x^2)"), 16, Interval{-0.9, 0.9});
    const FunctionExpr closed = parse("(x + x^3/3 + 3*x^3*(1+x^2/5)^2/(3+x^2)^3)/(1+x^2)");
    const PowerSeries cs = taylor(closed, 16);
    for (int k = 0; k <= 16; ++k) CHECK(std::abs(rat.series[k] - cs[k]) < 1e-12);
    for (double x : {-0.8, 0.3, 0.85}) CHECK(rat.eval(x) == doctest::Approx(eval(closed, x).value).epsilon(1e-11));

    CHECK_THROWS_AS(generate_h(parse("x^2"), parse("x"), 8), ParityError);
    CHECK_THROWS_AS(generate_h(parse("0"), parse("x + x^2"), 8), ParityError);
  }

  TEST_CASE("string conversions") {
    for (CriterionId id : {CriterionId::center, CriterionId::s_relation, CriterionId::odd_relation,
                           CriterionId::recurrence, CriterionId::zero_damping, CriterionId::differential_identity,
                           CriterionId::potential_involution, CriterionId::damping_involution}) {
      CHECK(criterion_from_string(to_string(id)) == id);
    }
    CHECK(verdict_from_string("fails") == Verdict::fails);
    CHECK_THROWS_AS(verdict_from_string("maybe"), std::invalid_argument);
  }
}
