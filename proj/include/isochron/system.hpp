#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "isochron/funexpr.hpp"

namespace isochron {

class NotNormalized : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  bool contains(double x) const { return x > lo && x < hi; }
  double radius() const { return std::min(-lo, hi); }
};

// x' = y, y' = -h(x) - g(x) y - f(x) y^2.
struct SystemSpec {
  FunctionExpr f;
  FunctionExpr g;
  FunctionExpr h;
  Interval domain;
  bool domain_from_user = false;
  // h(0) = 0, h'(0) = 1 and f(0) = 0 within 1e-10.
  bool normalized = false;
  std::string normalization_note;
};

using ScalarFn = std::function<double(double)>;

// Numeric coefficient functions of a system of the same form as SystemSpec.
struct NumericSystem {
  ScalarFn f;
  ScalarFn g;
  ScalarFn h;
  Interval domain;
  bool f_zero = false;
  bool g_zero = false;
};

SystemSpec make_system(FunctionExpr f, FunctionExpr g, FunctionExpr h,
                       std::optional<Interval> domain = std::nullopt);
SystemSpec make_system(std::string_view f, std::string_view g, std::string_view h,
                       std::optional<Interval> domain = std::nullopt);

void require_normalized(const SystemSpec& sys);

// Largest (-r, r), r <= 2, on which a 64-point sample of f, g, h raises no
// domain error and x h(x) > 0.
Interval heuristic_domain(const FunctionExpr& f, const FunctionExpr& g, const FunctionExpr& h);

// x h(x) > 0 at `samples` grid points of the domain excluding 0.
bool restoring_on_domain(const SystemSpec& sys, int samples = 64);

NumericSystem numeric(const SystemSpec& sys);

}  // namespace isochron
