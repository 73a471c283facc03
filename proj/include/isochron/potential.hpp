#pragma once

// Numeric potential wells H(x) = \int_0^x h and integrals over them with
// inverse-square-root endpoint singularities.

#include <functional>
#include <stdexcept>
#include <utility>

#include "isochron/system.hpp"

namespace isochron {

class NoBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SeparatrixEnergy : public NoBracket {
 public:
  using NoBracket::NoBracket;
};

class Potential {
 public:
  // reach bounds the outward search for turning points.
  explicit Potential(ScalarFn h, double reach = 50.0);

  double operator()(double x) const;  // H(x)
  double force(double x) const { return h_(x); }
  // \int_a^b h, accurate when |b - a| is small.
  double integral(double a, double b) const;
  double reach() const { return reach_; }

  struct Crossing {
    double x = 0.0;
    bool at_boundary = false;  // the level is reached exactly where h vanishes
  };
  // Point on the side sign(direction) with H = c. Throws NoBracket when the
  // well ends (h changes sign) or reach is exceeded before H reaches c.
  Crossing level_crossing(double c, double direction) const;

 private:
  ScalarFn h_;
  double reach_;
};

// Roots a < 0 < b of H = c; throws SeparatrixEnergy at or above the
// separatrix level.
std::pair<double, double> turning_points(const Potential& pot, double c);

// \int_a^b w(x) / sqrt(c - H(x)) dx over the well at level c = H(a) = H(b),
// by tanh-sinh on [a, 0] and [0, b] with c - H evaluated as an integral of
// h from the nearest turning point.
double well_integral(const Potential& pot, double a, double b, const std::function<double(double)>& w,
                     double tol = 1e-12);

}  // namespace isochron
