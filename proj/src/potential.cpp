#include "isochron/potential.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

namespace isochron {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

double root_between(const std::function<double(double)>& fn, double lo, double hi) {
  double flo = fn(lo), fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace

Potential::Potential(ScalarFn h, double reach) : h_(std::move(h)), reach_(reach) {}

double Potential::operator()(double x) const { return integral(0.0, x); }

double Potential::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (std::abs(b - a) < 1e-3) return gauss<double, 20>::integrate(h_, a, b);
  return gauss_kronrod<double, 31>::integrate(h_, a, b, 10, 1e-12);
}

Potential::Crossing Potential::level_crossing(double c, double direction) const {
  const double d = direction > 0 ? 1.0 : -1.0;
  const double scale = std::sqrt(2.0 * std::max(c, 0.0));
  double step = std::max(scale, 1e-12) / 16.0;
  double prev = 0.0;
  double x = d * step;
  const auto level = [&](double t) { return (*this)(t) - c; };
  for (int it = 0; it < 100000; ++it) {
    if (std::abs(x) > reach_) throw NoBracket("level not reached within the search reach");
    double hx;
    try {
      hx = h_(x);
    } catch (const DomainError&) {
      throw NoBracket("potential not evaluable before the level is reached");
    }
    if (!(x * hx > 0.0)) {
      // Well boundary between prev and x: locate the zero of h.
      const double xb = prev == 0.0 ? x : root_between([&](double t) { return h_(t); }, std::min(prev, x), std::max(prev, x));
      const double lb = level(xb);
      const double slack = 1e-13 * std::max(1.0, std::abs(c));
      if (std::abs(lb) <= slack) return {xb, true};
      if (lb < 0.0) throw SeparatrixEnergy("level lies above the well boundary");
      return {root_between(level, std::min(prev, xb), std::max(prev, xb)), false};
    }
    if (level(x) >= 0.0) {
      double r = root_between(level, std::min(prev, x), std::max(prev, x));
      // Newton polish on H(r) = c.
      for (int k = 0; k < 3; ++k) {
        const double hr = h_(r);
        if (hr == 0.0) break;
        const double nr = r - level(r) / hr;
        if (!(nr * d > 0.0) || std::abs(nr - r) > step) break;
        r = nr;
      }
      return {r, false};
    }
    prev = x;
    step *= 1.05;
    x += d * step;
  }
  throw NoBracket("level search did not terminate");
}

std::pair<double, double> turning_points(const Potential& pot, double c) {
  if (!(c > 0.0)) throw NoBracket("turning points need a positive energy");
  const auto right = pot.level_crossing(c, 1.0);
  const auto left = pot.level_crossing(c, -1.0);
  if (right.at_boundary || left.at_boundary) throw SeparatrixEnergy("energy equals the separatrix level");
  return {left.x, right.x};
}

double well_integral(const Potential& pot, double a, double b, const std::function<double(double)>& w, double tol) {
  tanh_sinh<double> integrator(12);
  // Singular endpoint at b: the complement argument is b - x there.
  const auto right = [&](double x, double xc) {
    const double dist = xc > 0.0 ? xc : b - x;
    const double gap = dist * gauss<double, 20>::integrate([&](double t) { return pot.force(b - dist * t); }, 0.0, 1.0);
    return gap > 0.0 ? w(b - dist) / std::sqrt(gap) : 0.0;
  };
  // Singular endpoint at a: the complement argument is a - x there.
  const auto left = [&](double x, double xc) {
    const double dist = xc < 0.0 ? -xc : x - a;
    const double gap = -dist * gauss<double, 20>::integrate([&](double t) { return pot.force(a + dist * t); }, 0.0, 1.0);
    return gap > 0.0 ? w(a + dist) / std::sqrt(gap) : 0.0;
  };
  return integrator.integrate(left, a, 0.0, tol) + integrator.integrate(right, 0.0, b, tol);
}

}  // namespace isochron
