#include "isochron/involution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace isochron {

namespace {

double solve_level(const Potential& pot, double target, double lo, double hi) {
  const auto fn = [&](double t) { return pot(t) - target; };
  double flo = fn(lo), fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    // Endpoint rounding at the turning points: take the closer end.
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

// A(y) for y inside the well [a, b], using the monotone branch opposite y.
double involution_in_well(const Potential& pot, double y, double a, double b) {
  if (y == 0.0) return 0.0;
  const double target = pot(y);
  return y > 0.0 ? solve_level(pot, target, a, 0.0) : solve_level(pot, target, 0.0, b);
}

PowerSeries potential_series(const FunctionExpr& h, int n) { return taylor(h, n); }

}  // namespace

PowerSeries involution_series(const PowerSeries& phi_integrand) {
  const PowerSeries Phi = integrate(phi_integrand);
  const double scale = std::max(1.0, Phi.max_abs());
  if (std::abs(Phi[1]) > 1e-12 * scale) throw LeadingTermError("involution: Phi has a linear term");
  const double c = Phi[2];
  if (!(c > 1e-12 * scale)) throw LeadingTermError("involution: Phi has no positive quadratic leading term");
  PowerSeries base = Phi;
  base[1] = 0.0;
  const PowerSeries w = sqrt((1.0 / c) * base);
  const PowerSeries winv = revert(w);
  return compose(winv, -w);
}

double involution_numeric(const Potential& phi, double x) {
  if (x == 0.0) return 0.0;
  const Potential::Crossing c = phi.level_crossing(phi(x), x > 0.0 ? -1.0 : 1.0);
  return c.x;
}

double trust_radius(const PowerSeries& a, const PowerSeries& b, double tol, double r_max) {
  constexpr int kSteps = 400;
  double last = 0.0;
  for (int k = 1; k <= kSteps; ++k) {
    const double r = r_max * k / kSteps;
    if (std::abs(a.eval(r) - b.eval(r)) > tol || std::abs(a.eval(-r) - b.eval(-r)) > tol) break;
    last = r;
  }
  return last;
}

InvolutionTable build_involution_table(const FunctionExpr& integrand, int order, int points,
                                       std::optional<double> radius) {
  InvolutionTable t;
  t.series_A = involution_series(taylor(integrand, order + 1));
  const PowerSeries coarse = involution_series(taylor(integrand, std::max(order - 3, 2)));
  t.trust_radius = trust_radius(t.series_A, coarse);
  t.rho = 0.5 * (PowerSeries::identity(t.series_A.order()) - t.series_A);
  const PowerSeries AA = compose(t.series_A, t.series_A) - PowerSeries::identity(t.series_A.order());
  t.series_involution_error = AA.max_abs();

  const Evaluator he(integrand);
  const Potential pot([he](double x) { return he(x); });
  const double r = radius ? *radius : t.trust_radius;
  const int half = std::max(1, points / 2);
  for (int k = half; k >= 1; --k) t.grid.push_back(-r * k / half);
  for (int k = 1; k <= half; ++k) t.grid.push_back(r * k / half);
  for (double x : t.grid) {
    const double A = involution_numeric(pot, x);
    t.A_values.push_back(A);
    t.level_residuals.push_back(std::abs(pot(A) - pot(x)));
    double back = std::numeric_limits<double>::quiet_NaN();
    try {
      back = involution_numeric(pot, A);
    } catch (const NoBracket&) {
    }
    t.involution_errors.push_back(std::abs(back - x));
  }
  return t;
}

WeightedIdentity weighted_identity(const Potential& pot, double c) {
  WeightedIdentity out;
  out.energy = c;
  const auto [a, b] = turning_points(pot, c);
  out.a = a;
  out.b = b;
  const auto w = [&, a = a, b = b](double y) {
    if (std::abs(y) < 1e-9 * (b - a)) return 0.0;
    const double A = involution_in_well(pot, y, a, b);
    const double hA = pot.force(A);
    if (hA == 0.0) return 0.0;
    return 1.0 + pot.force(y) / hA;
  };
  out.value = well_integral(pot, a, b, w, 1e-10);
  return out;
}

CriterionReport potential_involution_check(const FunctionExpr& h, int order, Tolerance tol,
                                           const std::vector<double>& energies_at) {
  const int n = order + kOrderPadding;
  const PowerSeries hs = potential_series(h, n);
  if (std::abs(hs[0]) > 1e-10 || std::abs(hs[1] - 1.0) > 1e-10) {
    throw NotNormalized("potential_involution_check: need h(0) = 0 and h'(0) = 1");
  }
  CriterionReport report;
  report.criterion_id = CriterionId::potential_involution;
  report.tolerance = tol.rel;

  const PowerSeries A = involution_series(hs);
  const PowerSeries x = PowerSeries::identity(A.order());
  const PowerSeries quarter = 0.25 * (x - A) * (1.0 - differentiate(A));
  const PowerSeries r3 = (hs - quarter).truncated(order);
  const PowerSeries root = sqrt(2.0 * integrate(hs));
  const PowerSeries closed = x - 2.0 * root;
  const PowerSeries r4 = (A - closed).truncated(std::min(order, std::min(A.order(), closed.order())));
  const PowerSeries h_cut = hs.truncated(order);
  const PowerSeries A_cut = A.truncated(order);

  settle(report, r3, prefix_thresholds({&h_cut, &quarter}, order, tol));
  const auto thr4 = prefix_thresholds({&A_cut, &closed}, r4.order(), tol);
  for (int k = 0; k <= r4.order(); ++k) {
    if (std::abs(r4[k]) >= thr4[static_cast<std::size_t>(k)]) {
      std::ostringstream os;
      os << "A - x + 2 sqrt(2H) nonzero at order " << k << " (" << r4[k] << ")";
      report.notes.push_back(os.str());
      if (!report.first_obstruction || k < *report.first_obstruction) report.first_obstruction = k;
      report.verdict = Verdict::fails;
      break;
    }
  }
  report.series.push_back({"A", std::vector<double>(A_cut.coeffs().begin(), A_cut.coeffs().end())});
  report.series.push_back({"closed_form_residual", std::vector<double>(r4.coeffs().begin(), r4.coeffs().end())});

  const Evaluator he(h);
  const Potential pot([he](double t) { return he(t); });
  NamedSeries energies{"weighted_identity_energy", {}}, values{"weighted_identity_value", {}};
  for (double b : energies_at) {
    try {
      const double c = pot(b);
      const WeightedIdentity wi = weighted_identity(pot, c);
      energies.coeffs.push_back(c);
      values.coeffs.push_back(wi.value);
    } catch (const std::exception& e) {
      report.notes.push_back(std::string("weighted identity skipped at amplitude ") + std::to_string(b) + ": " + e.what());
    }
  }
  if (!values.coeffs.empty()) {
    double mx = 0.0;
    for (double v : values.coeffs) mx = std::max(mx, std::abs(v));
    std::ostringstream os;
    os << "weighted turning-point identity: max |I| = " << mx << " over " << values.coeffs.size() << " energies";
    report.notes.push_back(os.str());
  }
  report.series.push_back(std::move(energies));
  report.series.push_back(std::move(values));
  return report;
}

CriterionReport damping_involution_check(const FunctionExpr& g, const FunctionExpr& h, int order, Tolerance tol) {
  const int n = order + kOrderPadding;
  const PowerSeries gs = taylor(g, n), hs = taylor(h, n);
  CriterionReport report;
  report.criterion_id = CriterionId::damping_involution;
  report.tolerance = tol.rel;
  if (std::abs(gs[0]) > tol.abs || !(gs[1] > tol.abs)) {
    report.verdict = Verdict::inapplicable;
    report.notes.push_back("requires g(0) = 0 and g'(0) > 0");
    return report;
  }
  const PowerSeries A = involution_series(gs);
  const PowerSeries s = 0.5 * (PowerSeries::identity(A.order()) - A);
  const ReducedLienard red = reduce_series(PowerSeries(n), gs, hs);
  report = s_relation_residual(red, s, order, tol);
  report.criterion_id = CriterionId::damping_involution;

  const PowerSeries s2 = solve_s(red, tol);
  const int m = std::min(s.order(), s2.order());
  double diff = 0.0;
  for (int k = 0; k <= m; ++k) diff = std::max(diff, std::abs(s[k] - s2[k]));
  std::ostringstream os;
  os << "s agrees with the reduced-chart half-difference to " << diff;
  report.notes.push_back(os.str());
  return report;
}

std::pair<PowerSeries, PowerSeries> transform_by_involution(const FunctionExpr& h, int order) {
  const PowerSeries hs = taylor(h, order + 3);
  const PowerSeries A = involution_series(hs);
  const PowerSeries dA = differentiate(A);
  const PowerSeries ddA = differentiate(dA);
  const PowerSeries f_tilde = ddA / dA;
  const PowerSeries h_tilde = compose(hs, A) / dA;
  return {f_tilde.truncated(std::min(order, f_tilde.order())), h_tilde.truncated(std::min(order, h_tilde.order()))};
}

}  // namespace isochron
