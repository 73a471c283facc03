#include "isochron/system.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace isochron {

namespace {

constexpr double kNormTol = 1e-10;

// Value and slope at 0 via the Taylor expansion so removable singularities
// (0/0 closed forms) are handled.
std::pair<double, double> value_and_slope_at_zero(const FunctionExpr& e) {
  try {
    const PowerSeries p = taylor(e, 2);
    return {p[0], p[1]};
  } catch (const DomainError&) {
    const EvalResult r = eval(e, 0.0, 1);
    return {r.value, r.d1};
  }
}

bool sample_ok(const Evaluator& f, const Evaluator& g, const Evaluator& h, double x) {
  try {
    const double fv = f(x), gv = g(x), hv = h(x);
    return std::isfinite(fv) && std::isfinite(gv) && std::isfinite(hv) && x * hv > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

SystemSpec make_system(FunctionExpr f, FunctionExpr g, FunctionExpr h, std::optional<Interval> domain) {
  SystemSpec sys;
  sys.f = std::move(f);
  sys.g = std::move(g);
  sys.h = std::move(h);
  std::ostringstream note;
  try {
    const auto [h0, h1] = value_and_slope_at_zero(sys.h);
    const auto [f0, f1] = value_and_slope_at_zero(sys.f);
    (void)f1;
    sys.normalized = std::abs(h0) <= kNormTol && std::abs(h1 - 1.0) <= kNormTol && std::abs(f0) <= kNormTol;
    if (!sys.normalized) note << "h(0)=" << h0 << ", h'(0)=" << h1 << ", f(0)=" << f0;
  } catch (const DomainError& e) {
    sys.normalized = false;
    note << "cannot evaluate at 0: " << e.what();
  }
  sys.normalization_note = note.str();
  if (domain) {
    sys.domain = *domain;
    sys.domain_from_user = true;
  } else {
    sys.domain = heuristic_domain(sys.f, sys.g, sys.h);
  }
  return sys;
}

SystemSpec make_system(std::string_view f, std::string_view g, std::string_view h, std::optional<Interval> domain) {
  return make_system(parse(f), parse(g), parse(h), domain);
}

void require_normalized(const SystemSpec& sys) {
  if (!sys.normalized) {
    throw NotNormalized("system is not normalized (need h(0)=0, h'(0)=1, f(0)=0): " + sys.normalization_note);
  }
}

Interval heuristic_domain(const FunctionExpr& f, const FunctionExpr& g, const FunctionExpr& h) {
  const Evaluator fe(f), ge(g), he(h);
  double r = 2.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    double bad = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 32; ++k) {
      const double x = r * k / 32.0;
      if (!sample_ok(fe, ge, he, x) || !sample_ok(fe, ge, he, -x)) {
        bad = x;
        break;
      }
    }
    if (!std::isfinite(bad)) return {-r, r};
    r = 0.9 * bad;
  }
  return {-r, r};
}

bool restoring_on_domain(const SystemSpec& sys, int samples) {
  const Evaluator he(sys.h);
  const int half = samples / 2;
  for (int k = 1; k <= half; ++k) {
    const double t = static_cast<double>(k) / (half + 1);
    for (double x : {sys.domain.hi * t, sys.domain.lo * t}) {
      try {
        if (!(x * he(x) > 0.0)) return false;
      } catch (const DomainError&) {
        return false;
      }
    }
  }
  return true;
}

NumericSystem numeric(const SystemSpec& sys) {
  auto fe = std::make_shared<Evaluator>(sys.f);
  auto ge = std::make_shared<Evaluator>(sys.g);
  auto he = std::make_shared<Evaluator>(sys.h);
  NumericSystem n;
  n.f = [fe](double x) { return (*fe)(x); };
  n.g = [ge](double x) { return (*ge)(x); };
  n.h = [he](double x) { return (*he)(x); };
  n.domain = sys.domain;
  n.f_zero = sys.f.is_constant(0.0);
  n.g_zero = sys.g.is_constant(0.0);
  return n;
}

}  // namespace isochron
