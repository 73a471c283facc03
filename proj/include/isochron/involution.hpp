#pragma once

// Involutions A of a well Phi: Phi(A(x)) = Phi(x), A(x) x < 0.

#include <stdexcept>
#include <utility>
#include <vector>

#include "isochron/criteria.hpp"
#include "isochron/funexpr.hpp"
#include "isochron/potential.hpp"
#include "isochron/series.hpp"

namespace isochron {

class LeadingTermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A = w^{-1}(-w) with w = sqrt(Phi / c), Phi = \int integrand = c x^2 + ...
// (c > 0). The result has order integrand.order() - 1.
PowerSeries involution_series(const PowerSeries& phi_integrand);

// Opposite-sign solution of Phi(a) = Phi(x); throws NoBracket past the
// well boundary.
double involution_numeric(const Potential& phi, double x);

// Largest r on a fine grid such that the two truncations agree to tol on
// [-r, r].
double trust_radius(const PowerSeries& a, const PowerSeries& b, double tol = 1e-8, double r_max = 2.0);

struct InvolutionTable {
  std::vector<double> grid;
  std::vector<double> A_values;
  std::vector<double> level_residuals;
  std::vector<double> involution_errors;  // |A(A(x)) - x|
  PowerSeries series_A;
  PowerSeries rho;  // (x - A)/2
  double trust_radius = 0.0;
  double series_involution_error = 0.0;  // max coefficient of A(A(x)) - x
};

// Grid of n points on (-r, r) excluding 0, with r the trust radius of the
// series (capped by the well), or given explicitly.
InvolutionTable build_involution_table(const FunctionExpr& integrand, int order, int points = 20,
                                       std::optional<double> radius = std::nullopt);

struct WeightedIdentity {
  double energy = 0.0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;  // \int_a^b (1 + A'(y)) / sqrt(c - H(y)) dy
};

WeightedIdentity weighted_identity(const Potential& pot, double c);

// Potential case g = f = 0: r3 = h - (x - A)(1 - A')/4, r4 = A - x + 2 sqrt(2H).
// `energies_at` are amplitudes b > 0 whose levels H(b) sample the identity.
CriterionReport potential_involution_check(const FunctionExpr& h, int order = kDefaultOrder, Tolerance tol = {},
                                           const std::vector<double>& energies_at = {0.2, 0.4, 0.6});

// Damping involution: s = (x - A_G)/2 with A_G the involution of G = \int g,
// residual h - s s' (1 + (\int s g)^2 / s^4). Requires g(0) = 0, g'(0) > 0.
CriterionReport damping_involution_check(const FunctionExpr& g, const FunctionExpr& h, int order = kDefaultOrder,
                                         Tolerance tol = {});

// Coefficients f~ = A''/A' and h~ = h(A)/A' of the transformed equation.
std::pair<PowerSeries, PowerSeries> transform_by_involution(const FunctionExpr& h, int order = kDefaultOrder);

}  // namespace isochron
