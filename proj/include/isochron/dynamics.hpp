#pragma once

// Numerical period measurement for x' = y, y' = -h(x) - g(x) y - f(x) y^2.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isochron/potential.hpp"
#include "isochron/system.hpp"

namespace isochron {

class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoReturn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Escaped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OrbitOptions {
  double tol = 1e-12;
  double t_max = 100.0;
  double max_dt = 0.1;
  // |x| beyond this counts as escape; 0 means 4 times the domain radius bound.
  double escape_radius = 0.0;
};

using State = std::array<double, 2>;

// Accepted steps of an adaptive integration with cubic Hermite
// interpolation between them.
class Trajectory {
 public:
  void push(double t, const State& s, const State& ds);
  State at(double t) const;
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  std::size_t steps() const { return t_.size(); }
  const std::vector<double>& times() const { return t_; }
  const std::vector<State>& states() const { return s_; }

 private:
  std::vector<double> t_;
  std::vector<State> s_;
  std::vector<State> ds_;
};

State vector_field(const NumericSystem& sys, const State& s);

Trajectory integrate_orbit(const NumericSystem& sys, double x0, double t_max, double tol = 1e-12,
                           const OrbitOptions& opts = {});

struct ReturnResult {
  double period = 0.0;
  double closure_error = 0.0;
};

// Time of the second crossing of {y = 0} on the side of x0 in the starting
// direction. Throws NoReturn, Escaped, StepUnderflow or DomainError.
ReturnResult return_period(const NumericSystem& sys, double x0, const OrbitOptions& opts = {});

double period_quadrature(const Potential& pot, double c);

enum class RowStatus { ok, escaped, no_return, singular, open };
enum class Monotonicity { constant, increasing, decreasing, non_monotone, undetermined };

std::string to_string(RowStatus s);
std::string to_string(Monotonicity m);
RowStatus row_status_from_string(const std::string& s);
Monotonicity monotonicity_from_string(const std::string& s);

struct ScanRow {
  double amplitude = 0.0;
  std::optional<double> energy;
  double period = 0.0;  // return time; meaningful for ok and open rows
  RowStatus status = RowStatus::ok;
  double closure_error = 0.0;
  std::optional<double> quadrature_period;
  std::string message;
};

struct PeriodScan {
  std::vector<ScanRow> rows;
  std::string method;  // "ode_return" or "ode_return+quadrature"
  double integrator_tol = 1e-12;
  double closure_tol = 1e-7;
  double constancy_tol = 1e-6;
  std::optional<double> max_deviation;  // max |T - 2 pi| over ok rows
  Monotonicity monotonicity = Monotonicity::undetermined;
};

struct ScanOptions {
  OrbitOptions orbit;
  double closure_tol = 1e-7;
  double constancy_tol = 1e-6;
  unsigned threads = 0;  // 0: hardware concurrency
  // Also run the potential quadrature when f == g == 0.
  bool quadrature = true;
};

// 8 log-spaced values in (0.05, 0.8 r), r the domain radius.
std::vector<double> default_amplitudes(const Interval& domain);

PeriodScan period_scan(const NumericSystem& sys, const std::vector<double>& amplitudes,
                       const ScanOptions& opts = {});

Monotonicity classify(const std::vector<ScanRow>& rows, double tol);

// |T - 2 pi| at the largest amplitude in `ladder` whose orbit returns (ok or
// open), trying amplitudes in decreasing order.
struct LadderDeviation {
  double amplitude = 0.0;
  double deviation = 0.0;
  RowStatus status = RowStatus::ok;
};
std::optional<LadderDeviation> deviation_at_largest(const NumericSystem& sys, std::vector<double> ladder,
                                                    const OrbitOptions& opts = {}, double closure_tol = 1e-7);

}  // namespace isochron
