#include "isochron/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace isochron {

namespace {

using boost::math::quadrature::gauss_kronrod;

double quad(const std::function<double(double)>& fn, double a, double b) {
  if (a == b) return 0.0;
  return gauss_kronrod<double, 15>::integrate(fn, a, b, 10, 1e-12);
}

// Chebyshev coefficients a_k of the degree-n interpolant through the
// Lobatto points t_j = cos(pi j / n).
std::vector<double> cheb_coeffs(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size()) - 1;
  std::vector<double> a(values.size());
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      s += w * values[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * j * k / n);
    }
    a[static_cast<std::size_t>(k)] = s * 2.0 / n;
  }
  a.front() *= 0.5;
  a.back() *= 0.5;
  return a;
}

double clenshaw(const std::vector<double>& a, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + a[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + a[0];
}

// Antiderivative coefficients (in t) of sum a_k T_k, scaled by dx/dt.
std::vector<double> cheb_integral(const std::vector<double>& a, double scale) {
  std::vector<double> A(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k == 0) {
      A[1] += a[0];
    } else if (k == 1) {
      A[2] += a[1] / 4.0;
    } else {
      A[k + 1] += a[k] / (2.0 * (k + 1));
      A[k - 1] -= a[k] / (2.0 * (k - 1));
    }
  }
  for (double& c : A) c *= scale;
  return A;
}

// Integral from the panel endpoint t0 (= +-1) with the given start value;
// returns coefficients.
std::vector<double> integrate_panel(const std::vector<double>& node_values, double half, double t0, double start) {
  std::vector<double> A = cheb_integral(cheb_coeffs(node_values), half);
  A[0] += start - clenshaw(A, t0);
  return A;
}

}  // namespace

ReducedLienard reduce_series(const PowerSeries& f, const PowerSeries& g, const PowerSeries& h) {
  const int n = std::min({f.order(), g.order(), h.order()});
  ReducedLienard r;
  r.f = f.truncated(n);
  r.g = g.truncated(n);
  r.h = h.truncated(n);
  r.F = integrate(r.f);
  r.expF = exp(r.F);
  r.y_of_x = integrate(r.expF);
  r.u = revert(r.y_of_x);
  r.g_tilde = compose(r.g, r.u);
  r.h_tilde = compose(r.h * r.expF, r.u);
  r.G_tilde = integrate(r.g_tilde);
  r.H_tilde = integrate(r.h_tilde);

  const PowerSeries du = differentiate(r.u);
  const PowerSeries ddu = differentiate(du);
  const PowerSeries defining = compose(r.f, r.u) * du * du + ddu;
  r.defining_residual = defining.max_abs();
  return r;
}

ReducedLienard reduce(const SystemSpec& sys, int order) {
  require_normalized(sys);
  return reduce_series(taylor(sys.f, order), taylor(sys.g, order), taylor(sys.h, order));
}

double y_numeric(const SystemSpec& sys, double x) {
  if (!(x >= sys.domain.lo && x <= sys.domain.hi)) throw OutOfDomain("y_numeric: x outside the system domain");
  const Evaluator f(sys.f);
  const auto F = [&](double s) { return quad([&](double t) { return f(t); }, 0.0, s); };
  try {
    return quad([&](double s) { return std::exp(F(s)); }, 0.0, x);
  } catch (const DomainError& e) {
    throw OutOfDomain(std::string("y_numeric: ") + e.what());
  }
}

double u_numeric(const SystemSpec& sys, double y) {
  if (y == 0.0) return 0.0;
  const Evaluator f(sys.f);
  const double bound = y > 0 ? sys.domain.hi : sys.domain.lo;
  const double y_bound = y_numeric(sys, bound);
  if (std::abs(y) > std::abs(y_bound)) throw OutOfDomain("u_numeric: y outside the image of the domain");
  double lo = std::min(0.0, bound), hi = std::max(0.0, bound);
  double x = std::clamp(y, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double r = y_numeric(sys, x) - y;
    if (r > 0) hi = x;
    else lo = x;
    const double F = quad([&](double t) { return f(t); }, 0.0, x);
    double next = x - r / std::exp(F);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

LienardChart::LienardChart(ScalarFn f, ScalarFn g, Interval domain, double panel_width, int degree)
    : domain_(domain) {
  std::vector<double> t(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) t[static_cast<std::size_t>(j)] = std::cos(std::numbers::pi * j / degree);

  // Walk outward from 0 on each side so start values are known.
  auto build_side = [&](double end) {
    std::vector<Panel> side;
    const int count = std::max(1, static_cast<int>(std::ceil(std::abs(end) / panel_width)));
    const double w = end / count;
    double F0 = 0.0, y0 = 0.0, K0 = 0.0;
    for (int i = 0; i < count; ++i) {
      const double inner = w * i, outer = w * (i + 1);
      Panel p;
      p.lo = std::min(inner, outer);
      p.hi = std::max(inner, outer);
      const double mid = 0.5 * (p.lo + p.hi), half = 0.5 * (p.hi - p.lo);
      const double t_inner = end > 0 ? -1.0 : 1.0;
      const double t_outer = -t_inner;
      std::vector<double> xs(t.size()), fv(t.size()), gv(t.size()), tmp(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) {
        xs[j] = mid + half * t[j];
        fv[j] = f(xs[j]);
        gv[j] = g(xs[j]);
      }
      p.F = integrate_panel(fv, half, t_inner, F0);
      std::vector<double> eF(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) eF[j] = std::exp(clenshaw(p.F, t[j]));
      p.y = integrate_panel(eF, half, t_inner, y0);
      for (std::size_t j = 0; j < t.size(); ++j) tmp[j] = clenshaw(p.y, t[j]) * gv[j] * eF[j];
      p.K = integrate_panel(tmp, half, t_inner, K0);
      F0 = clenshaw(p.F, t_outer);
      y0 = clenshaw(p.y, t_outer);
      K0 = clenshaw(p.K, t_outer);
      side.push_back(std::move(p));
    }
    return side;
  };

  std::vector<Panel> neg = build_side(domain.lo);
  std::vector<Panel> pos = build_side(domain.hi);
  std::reverse(neg.begin(), neg.end());
  panels_ = std::move(neg);
  panels_.insert(panels_.end(), std::make_move_iterator(pos.begin()), std::make_move_iterator(pos.end()));
}

const LienardChart::Panel& LienardChart::locate(double x) const {
  if (!(x >= domain_.lo && x <= domain_.hi)) throw OutOfDomain("chart: x outside the domain");
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x, [](double v, const Panel& p) { return v < p.lo; });
  if (it != panels_.begin()) --it;
  return *it;
}

double LienardChart::eval(const std::vector<double> Panel::*field, double x) const {
  const Panel& p = locate(x);
  const double t = std::clamp((2.0 * x - p.lo - p.hi) / (p.hi - p.lo), -1.0, 1.0);
  return clenshaw(p.*field, t);
}

double LienardChart::F(double x) const { return eval(&Panel::F, x); }
double LienardChart::y(double x) const { return eval(&Panel::y, x); }
double LienardChart::K(double x) const { return eval(&Panel::K, x); }

double LienardChart::u(double target) const {
  const Interval range = y_range();
  if (!(target >= range.lo && target <= range.hi)) throw OutOfDomain("chart: y outside the image of the domain");
  double lo = domain_.lo, hi = domain_.hi;
  double x = std::clamp(target, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double r = y(x) - target;
    if (r == 0.0) return x;
    if (r > 0) hi = x;
    else lo = x;
    double next = x - r / std::exp(F(x));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4e-16 * std::max(1e-300, std::abs(x)) || hi - lo <= 1e-300) return next;
    x = next;
  }
  return x;
}

NumericSystem reduced_numeric(const SystemSpec& sys, std::shared_ptr<const LienardChart> chart) {
  const NumericSystem base = numeric(sys);
  NumericSystem r;
  r.f = [](double) { return 0.0; };
  r.f_zero = true;
  r.g_zero = base.g_zero;
  r.g = [chart, g = base.g](double y) { return g(chart->u(y)); };
  r.h = [chart, h = base.h](double y) {
    const double x = chart->u(y);
    return h(x) * std::exp(chart->F(x));
  };
  r.domain = chart->y_range();
  return r;
}

}  // namespace isochron
