#pragma once

// Change of variables y = \int_0^x e^{F}, F = \int_0^x f, which removes the
// f(x) y^2 term: x'' + f x'^2 + g x' + h = 0 becomes the Lienard equation
// y'' + g~(y) y' + h~(y) = 0 with g~(y) = g(u(y)), h~(y) = h(u(y)) e^{F(u(y))}
// and u the inverse of y(x). Time is unchanged, so periods are preserved.

#include <memory>
#include <stdexcept>
#include <vector>

#include "isochron/series.hpp"
#include "isochron/system.hpp"

namespace isochron {

class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReducedLienard {
  // Inputs expanded in x.
  PowerSeries f;
  PowerSeries g;
  PowerSeries h;

  PowerSeries F;        // \int_0^x f
  PowerSeries expF;     // e^F
  PowerSeries y_of_x;   // \int_0^x e^F
  PowerSeries u;        // inverse of y_of_x
  PowerSeries g_tilde;  // g(u(y))
  PowerSeries h_tilde;  // h(u(y)) e^{F(u(y))}
  PowerSeries G_tilde;  // \int_0^y g~
  PowerSeries H_tilde;  // \int_0^y h~

  // max |coefficient| of f(u) u'^2 + u'', which vanishes identically.
  double defining_residual = 0.0;

  int order() const { return g_tilde.order(); }
};

ReducedLienard reduce(const SystemSpec& sys, int order = kDefaultOrder);
ReducedLienard reduce_series(const PowerSeries& f, const PowerSeries& g, const PowerSeries& h);

// y(x) by adaptive Gauss-Kronrod quadrature of e^F (F itself by quadrature).
double y_numeric(const SystemSpec& sys, double x);
// Inverse of y_numeric by safeguarded Newton iteration.
double u_numeric(const SystemSpec& sys, double y);

// Piecewise Chebyshev representation of F, y and K = \int_0^x y g e^F on the
// system's domain, for fast numeric work in the reduced chart.
class LienardChart {
 public:
  LienardChart(ScalarFn f, ScalarFn g, Interval domain, double panel_width = 1.0 / 16.0, int degree = 24);

  double F(double x) const;
  double y(double x) const;
  double K(double x) const;
  // Inverse of y on the chart's domain; throws OutOfDomain.
  double u(double y) const;

  const Interval& domain() const { return domain_; }
  Interval y_range() const { return {y(domain_.lo), y(domain_.hi)}; }

  struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> F;
    std::vector<double> y;
    std::vector<double> K;
  };

 private:
  const Panel& locate(double x) const;
  double eval(const std::vector<double> Panel::*field, double x) const;

  Interval domain_;
  std::vector<Panel> panels_;  // sorted by lo
};

// Numeric reduced system y'' + g~(y) y' + h~(y) = 0 built on a chart.
NumericSystem reduced_numeric(const SystemSpec& sys, std::shared_ptr<const LienardChart> chart);

}  // namespace isochron
