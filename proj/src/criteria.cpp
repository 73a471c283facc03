#include "isochron/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "isochron/involution.hpp"

namespace isochron {

namespace {

struct Component {
  PowerSeries residual;
  std::vector<double> thresholds;
  std::string label;
};

std::optional<int> first_exceeding(const PowerSeries& r, const std::vector<double>& thr) {
  const int n = std::min(r.order(), static_cast<int>(thr.size()) - 1);
  for (int k = 0; k <= n; ++k) {
    if (std::abs(r[k]) >= thr[static_cast<std::size_t>(k)]) return k;
  }
  return std::nullopt;
}

// The first component supplies the recorded residuals; later ones only
// contribute obstructions.
void settle_components(CriterionReport& report, const std::vector<Component>& parts) {
  settle(report, parts.front().residual, parts.front().thresholds);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto k = first_exceeding(parts[i].residual, parts[i].thresholds);
    if (!k) continue;
    std::ostringstream os;
    os << parts[i].label << " nonzero at order " << *k << " (" << parts[i].residual[*k] << ")";
    report.notes.push_back(os.str());
    if (!report.first_obstruction || *k < *report.first_obstruction) {
      report.first_obstruction = *k;
    }
    report.verdict = Verdict::fails;
  }
}

CriterionReport inapplicable(CriterionId id, Tolerance tol, std::string why) {
  CriterionReport r;
  r.criterion_id = id;
  r.verdict = Verdict::inapplicable;
  r.tolerance = tol.rel;
  r.notes.push_back(std::move(why));
  return r;
}

NamedSeries named(std::string name, const PowerSeries& p) {
  return {std::move(name), std::vector<double>(p.coeffs().begin(), p.coeffs().end())};
}

bool is_zero_series(const PowerSeries& p, Tolerance tol) {
  for (double c : p.coeffs()) {
    if (std::abs(c) > tol.abs) return false;
  }
  return true;
}

// K = \int_0^y w g~ for a weight w.
PowerSeries weighted_integral(const PowerSeries& w, const PowerSeries& g_tilde) {
  return integrate(w * g_tilde);
}

std::string order_note(int available, int requested) {
  return "residual available through order " + std::to_string(available) + " of " + std::to_string(requested);
}

PowerSeries cap(const PowerSeries& r, int order, CriterionReport& report) {
  if (r.order() < order) report.notes.push_back(order_note(r.order(), order));
  return r.truncated(std::min(order, r.order()));
}

}  // namespace

std::string to_string(CriterionId id) {
  switch (id) {
    case CriterionId::center: return "center";
    case CriterionId::s_relation: return "s_relation";
    case CriterionId::odd_relation: return "odd_relation";
    case CriterionId::recurrence: return "recurrence";
    case CriterionId::zero_damping: return "zero_damping";
    case CriterionId::differential_identity: return "differential_identity";
    case CriterionId::potential_involution: return "potential_involution";
    case CriterionId::damping_involution: return "damping_involution";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "unknown";
}

CriterionId criterion_from_string(const std::string& s) {
  for (CriterionId id : {CriterionId::center, CriterionId::s_relation, CriterionId::odd_relation,
                         CriterionId::recurrence, CriterionId::zero_damping, CriterionId::differential_identity,
                         CriterionId::potential_involution, CriterionId::damping_involution}) {
    if (to_string(id) == s) return id;
  }
  throw std::invalid_argument("unknown criterion id: " + s);
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::holds, Verdict::fails, Verdict::inapplicable}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown verdict: " + s);
}

void settle(CriterionReport& report, const PowerSeries& r, const std::vector<double>& thresholds) {
  report.residuals.assign(r.coeffs().begin(), r.coeffs().end());
  report.max_residual = r.max_abs();
  report.first_obstruction = first_exceeding(r, thresholds);
  report.verdict = report.first_obstruction ? Verdict::fails : Verdict::holds;
}

bool is_odd(const PowerSeries& p, Tolerance tol) {
  const auto thr = prefix_thresholds({&p}, p.order(), tol);
  return !first_exceeding(even_part(p), thr);
}

PowerSeries even_part(const PowerSeries& p) { return parity(p).even_part; }

ReducedLienard reduce_padded(const SystemSpec& sys, int order) { return reduce(sys, order + kOrderPadding); }

CriterionReport center_check_series(const PowerSeries& f, const PowerSeries& g, const PowerSeries& h,
                                    int order, Tolerance tol) {
  const int n = std::min({f.order(), g.order(), h.order(), order});
  const PowerSeries eF = exp(integrate(f.truncated(n)));
  const PowerSeries P = integrate(g.truncated(n) * eF);
  const PowerSeries Q = integrate(h.truncated(n) * eF * eF);

  CriterionReport report;
  report.criterion_id = CriterionId::center;
  report.tolerance = tol.rel;
  if (std::abs(Q[2]) <= tol.abs) {
    return inapplicable(CriterionId::center, tol, "energy integral has no quadratic term");
  }

  PowerSeries R = P;
  PowerSeries Qk = PowerSeries::constant(1.0, n);
  std::vector<double> phi{0.0};
  for (int k = 1; 2 * k <= n; ++k) {
    Qk = Qk * Q;
    const double c = R[2 * k] / Qk[2 * k];
    phi.push_back(c);
    R -= c * Qk;
  }
  for (int k = 0; k <= n; k += 2) R[k] = 0.0;

  settle(report, R, prefix_thresholds({&P, &Q}, n, tol));
  report.series.push_back({"phi", phi});
  report.notes.push_back("G-integral expanded in powers of the energy integral; odd orders are obstructions");
  return report;
}

CriterionReport center_check(const SystemSpec& sys, int order, Tolerance tol) {
  require_normalized(sys);
  const int n = order + kOrderPadding;
  return center_check_series(taylor(sys.f, n), taylor(sys.g, n), taylor(sys.h, n), order, tol);
}

PowerSeries solve_s(const ReducedLienard& red, Tolerance tol) {
  const PowerSeries& G = red.G_tilde;
  if (is_zero_series(G, tol)) return sqrt(2.0 * red.H_tilde);
  const auto thr = prefix_thresholds({&G}, 2, tol);
  if (std::abs(G[1]) >= thr[1]) throw Inapplicable("damping does not vanish at the origin");
  if (std::abs(G[2]) < thr[2]) {
    throw Inapplicable("damping integral has no quadratic leading term (g~'(0) = 0)");
  }
  const PowerSeries integrand = G[2] > 0 ? red.g_tilde : -red.g_tilde;
  const PowerSeries A = involution_series(integrand);
  return 0.5 * (PowerSeries::identity(A.order()) - A);
}

CriterionReport s_relation_residual(const ReducedLienard& red, const PowerSeries& s, int order, Tolerance tol) {
  CriterionReport report;
  report.criterion_id = CriterionId::s_relation;
  report.tolerance = tol.rel;

  const PowerSeries K = weighted_integral(s, red.g_tilde);
  const PowerSeries K2 = K * K;
  const PowerSeries s4 = pow(s, 4);
  const PowerSeries q = shift_down(K2, 4, tol.threshold(K2.max_abs())) / shift_down(s4, 4, tol.threshold(s4.max_abs()));
  const PowerSeries rhs = s * differentiate(s) * (1.0 + q);
  const PowerSeries r = cap(red.h_tilde - rhs, order, report);
  settle(report, r, prefix_thresholds({&red.h_tilde, &rhs}, r.order(), tol));
  report.series.push_back(named("s", s.truncated(std::min(order, s.order()))));
  return report;
}

CriterionReport s_relation_check(const ReducedLienard& red, int order, Tolerance tol) {
  if (is_zero_series(red.G_tilde, tol)) {
    // g~ = 0: sqrt(2 H~) against the half-difference of the involution of H~.
    CriterionReport report;
    report.criterion_id = CriterionId::s_relation;
    report.tolerance = tol.rel;
    const PowerSeries s = sqrt(2.0 * red.H_tilde);
    const PowerSeries A = involution_series(red.h_tilde);
    const PowerSeries half = 0.5 * (PowerSeries::identity(A.order()) - A);
    const PowerSeries r = cap(half - s, order, report);
    settle(report, r, prefix_thresholds({&half, &s}, r.order(), tol));
    report.series.push_back(named("s", s.truncated(r.order())));
    report.notes.push_back("g~ = 0: compares sqrt(2 H~) with the half-difference of the involution of H~");
    return report;
  }
  try {
    return s_relation_residual(red, solve_s(red, tol), order, tol);
  } catch (const Inapplicable& e) {
    return inapplicable(CriterionId::s_relation, tol, e.what());
  }
}

CriterionReport odd_relation_check(const ReducedLienard& red, int order, Tolerance tol) {
  if (!is_odd(red.f, tol)) return inapplicable(CriterionId::odd_relation, tol, "f is not odd");
  if (!is_odd(red.g, tol) && !is_odd(red.h, tol)) {
    return inapplicable(CriterionId::odd_relation, tol, "neither g nor h is odd");
  }
  CriterionReport report;
  report.criterion_id = CriterionId::odd_relation;
  report.tolerance = tol.rel;

  const PowerSeries y = PowerSeries::identity(red.order());
  const PowerSeries K = weighted_integral(y, red.g_tilde);
  const PowerSeries K2 = K * K;
  const PowerSeries rhs = y.truncated(K2.order() - 3) + shift_down(K2, 3, tol.threshold(K2.max_abs()));
  const PowerSeries r = cap(red.h_tilde - rhs, order, report);
  const PowerSeries ge = even_part(red.g_tilde).truncated(r.order());
  settle_components(report, {{r, prefix_thresholds({&red.h_tilde, &rhs}, r.order(), tol), "relation"},
                             {ge, prefix_thresholds({&red.g_tilde}, r.order(), tol), "even part of g~"}});
  return report;
}

GeneratedH generate_h(const FunctionExpr& f, const FunctionExpr& g, int order, std::optional<Interval> domain) {
  const int n = order + kOrderPadding;
  const PowerSeries fs = taylor(f, n), gs = taylor(g, n);
  if (!is_odd(fs)) throw ParityError("generate_h: f is not odd");
  if (!is_odd(gs)) throw ParityError("generate_h: g is not odd");
  const ReducedLienard red = reduce_series(fs, gs, PowerSeries::identity(n));
  const PowerSeries y = PowerSeries::identity(n);
  const PowerSeries K = weighted_integral(y, red.g_tilde);
  const PowerSeries K2 = K * K;
  const PowerSeries h_tilde = y.truncated(n - 3) + shift_down(K2, 3, 1e-300);
  const PowerSeries hx = compose(h_tilde, red.y_of_x) * exp(-red.F);

  GeneratedH out;
  out.series = hx.truncated(std::min(order, hx.order()));
  const Interval dom = domain ? *domain : heuristic_domain(f, g, FunctionExpr::variable());
  const Evaluator fe(f), ge(g);
  out.chart = std::make_shared<LienardChart>([fe](double x) { return fe(x); }, [ge](double x) { return ge(x); }, dom);
  out.eval = [chart = out.chart, series = out.series](double x) {
    if (std::abs(x) < 1e-6) return series.eval(x);
    const double yv = chart->y(x), Kv = chart->K(x);
    return std::exp(-chart->F(x)) * (yv + Kv * Kv / (yv * yv * yv));
  };
  return out;
}

std::vector<double> recurrence_coefficients(const PowerSeries& g_tilde, int order, RecurrenceVariant variant) {
  std::vector<double> a(static_cast<std::size_t>(std::max(order, 1)) + 1, 0.0);
  a[1] = 1.0;
  for (int k = 1; 2 * k + 1 <= order; ++k) {
    double sum = 0.0;
    for (int m = 0; m <= k - 1; ++m) {
      const double den = variant == RecurrenceVariant::corrected ? 2.0 * k - 2.0 * m + 1.0 : 2.0 * k - 2.0 * m - 1.0;
      sum += g_tilde.coeff(2 * m + 1) * g_tilde.coeff(2 * k - 2 * m - 1) / ((2.0 * m + 3.0) * den);
    }
    a[static_cast<std::size_t>(2 * k + 1)] = sum;
  }
  return a;
}

CriterionReport recurrence_check(const ReducedLienard& red, int order, Tolerance tol, RecurrenceVariant variant) {
  if (!is_odd(red.g_tilde, tol) && !is_odd(red.h_tilde, tol)) {
    return inapplicable(CriterionId::recurrence, tol, "neither g~ nor h~ is odd");
  }
  CriterionReport report;
  report.criterion_id = CriterionId::recurrence;
  report.tolerance = tol.rel;
  const int n = std::min(order, red.h_tilde.order());
  if (n < order) report.notes.push_back(order_note(n, order));
  const auto a = recurrence_coefficients(red.g_tilde, n, variant);
  PowerSeries required(std::vector<double>(a.begin(), a.begin() + n + 1));
  const PowerSeries h = red.h_tilde.truncated(n);
  const PowerSeries r = h - required;
  const PowerSeries ge = even_part(red.g_tilde).truncated(n);
  settle_components(report, {{r, prefix_thresholds({&h, &required}, n, tol), "recurrence"},
                             {ge, prefix_thresholds({&red.g_tilde}, n, tol), "even part of g~"}});
  report.notes.push_back(variant == RecurrenceVariant::corrected
                             ? "recurrence denominator (2m+3)(2k-2m+1)"
                             : "recurrence denominator (2m+3)(2k-2m-1) (printed variant)");
  report.series.push_back({"required_h_tilde", a});
  return report;
}

CriterionReport zero_damping_check(const ReducedLienard& red, int order, Tolerance tol) {
  if (!is_zero_series(red.g, tol)) return inapplicable(CriterionId::zero_damping, tol, "g is not identically zero");
  CriterionReport report;
  report.criterion_id = CriterionId::zero_damping;
  report.tolerance = tol.rel;

  const PowerSeries Q = integrate(red.h * red.expF * red.expF);
  const PowerSeries X = sqrt(2.0 * Q);
  const PowerSeries x_of_X = revert(X);
  const PowerSeries U = compose(red.y_of_x, x_of_X) - PowerSeries::identity(x_of_X.order());
  const PowerSeries u = differentiate(U);
  const PowerSeries r = cap(even_part(u), order, report);
  const PowerSeries phi = compose(red.y_of_x, x_of_X);
  settle(report, r, prefix_thresholds({&phi, &u}, r.order(), tol));
  report.series.push_back(named("u", u.truncated(r.order())));
  return report;
}

CriterionReport differential_identity_check(const ReducedLienard& red, int order, Tolerance tol) {
  if (!is_odd(red.g, tol) && !is_odd(red.h, tol)) {
    return inapplicable(CriterionId::differential_identity, tol, "neither g nor h is odd");
  }
  CriterionReport report;
  report.criterion_id = CriterionId::differential_identity;
  report.tolerance = tol.rel;

  const PowerSeries y = PowerSeries::identity(red.order());
  const PowerSeries K = weighted_integral(y, red.g_tilde);
  const PowerSeries K2 = K * K;
  const PowerSeries term1 = 2.0 * red.g_tilde.truncated(K.order() - 2) * shift_down(K, 2, tol.threshold(K.max_abs()));
  const PowerSeries term2 = 3.0 * shift_down(K2, 4, tol.threshold(K2.max_abs()));
  const PowerSeries rhs_y = 1.0 + term1.truncated(term2.order()) - term2;
  const PowerSeries rhs = compose(rhs_y, red.y_of_x);
  const PowerSeries lhs = red.h * red.f + differentiate(red.h);
  const PowerSeries r = cap(lhs - rhs, order, report);
  const PowerSeries ge = even_part(red.g_tilde).truncated(r.order());
  settle_components(report, {{r, prefix_thresholds({&lhs, &rhs}, r.order(), tol), "identity"},
                             {ge, prefix_thresholds({&red.g_tilde}, r.order(), tol), "even part of g~"}});
  report.notes.push_back("identity h f + h' = 1 + 2 g~ K / y^2 - 3 K^2 / y^4 with K = int_0^y xi g~");
  return report;
}

}  // namespace isochron
