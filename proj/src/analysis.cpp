#include "isochron/analysis.hpp"

#include <cmath>
#include <sstream>

#include "isochron/involution.hpp"

namespace isochron {

namespace {

bool is_zero_series(const PowerSeries& p, Tolerance tol) {
  for (double c : p.coeffs()) {
    if (std::abs(c) > tol.abs) return false;
  }
  return true;
}

std::vector<CriterionReport> isochrony_criteria(const SystemSpec& sys, const ReducedLienard& red, int order,
                                                Tolerance tol) {
  std::vector<CriterionReport> out;
  out.push_back(s_relation_check(red, order, tol));
  out.push_back(odd_relation_check(red, order, tol));
  out.push_back(recurrence_check(red, order, tol));
  out.push_back(zero_damping_check(red, order, tol));
  out.push_back(differential_identity_check(red, order, tol));
  if (is_zero_series(red.f, tol)) {
    out.push_back(damping_involution_check(sys.g, sys.h, order, tol));
    if (is_zero_series(red.g, tol)) out.push_back(potential_involution_check(sys.h, order, tol));
  }
  return out;
}

void decide(IsochronyAnalysis& a) {
  a.verdict = Verdict::inapplicable;
  a.deciding.reset();
  a.first_obstruction.reset();
  if (a.center.verdict == Verdict::fails) {
    a.verdict = Verdict::fails;
    a.deciding = CriterionId::center;
    a.first_obstruction = a.center.first_obstruction;
    return;
  }
  for (const auto& r : a.criteria) {
    if (r.verdict == Verdict::inapplicable) continue;
    a.verdict = r.verdict;
    a.deciding = r.criterion_id;
    a.first_obstruction = r.first_obstruction;
    return;
  }
}

}  // namespace

IsochronyAnalysis analyze_isochrony(const SystemSpec& sys, int order, Tolerance tol) {
  require_normalized(sys);
  IsochronyAnalysis a;
  a.order = order;
  a.center = center_check(sys, order, tol);
  const ReducedLienard red = reduce_padded(sys, order);
  a.criteria = isochrony_criteria(sys, red, order, tol);
  decide(a);
  if (a.verdict == Verdict::holds && a.center.verdict != Verdict::holds) {
    a.warnings.push_back("isochronicity criterion holds but the center check did not confirm a center");
  }
  for (const auto& r : a.criteria) {
    if (r.verdict == Verdict::inapplicable || !a.deciding || a.deciding == CriterionId::center) continue;
    if (r.verdict != a.verdict) {
      a.warnings.push_back(to_string(r.criterion_id) + " reports " + to_string(r.verdict) + " against " +
                           to_string(*a.deciding));
    }
  }
  polynomial_guard(sys, a, tol);
  return a;
}

bool is_nonlinear_polynomial(const SystemSpec& sys) {
  if (!sys.f.is_polynomial() || !sys.g.is_polynomial() || !sys.h.is_polynomial()) return false;
  const int n = 8;
  const PowerSeries f = taylor(sys.f, n), g = taylor(sys.g, n), h = taylor(sys.h, n);
  const Tolerance tol;
  if (!is_zero_series(f, tol) || !is_zero_series(g, tol)) return true;
  for (int k = 2; k <= n; ++k) {
    if (std::abs(h[k]) > tol.abs) return true;
  }
  return false;
}

void polynomial_guard(const SystemSpec& sys, IsochronyAnalysis& analysis, Tolerance tol) {
  if (analysis.verdict != Verdict::holds || !is_nonlinear_polynomial(sys)) return;
  const int order = analysis.order;
  const int deep = 2 * std::max(order, 4);
  const ReducedLienard red = reduce_padded(sys, deep);
  std::optional<int> obstruction;
  for (const auto& r : isochrony_criteria(sys, red, deep, tol)) {
    if (r.verdict == Verdict::fails && r.first_obstruction &&
        (!obstruction || *r.first_obstruction < *obstruction)) {
      obstruction = r.first_obstruction;
      analysis.deciding = r.criterion_id;
    }
  }
  const CriterionReport c = center_check(sys, deep, tol);
  if (c.verdict == Verdict::fails && c.first_obstruction && (!obstruction || *c.first_obstruction < *obstruction)) {
    obstruction = c.first_obstruction;
    analysis.deciding = CriterionId::center;
  }
  std::ostringstream os;
  if (obstruction) {
    analysis.verdict = Verdict::fails;
    analysis.first_obstruction = obstruction;
    os << "polynomial system: holds at order " << order << " was a truncation artifact; obstruction at order "
       << *obstruction << " when rechecked at order " << deep;
  } else {
    os << "polynomial system reported isochronous; rechecked at order " << deep
       << " without obstruction (known polynomial exceptions exist); consider raising the order further";
  }
  analysis.warnings.push_back(os.str());
}

}  // namespace isochron
