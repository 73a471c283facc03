#include "isochron/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace isochron {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double escape_radius(const NumericSystem& sys, const OrbitOptions& opts) {
  if (opts.escape_radius > 0.0) return opts.escape_radius;
  return 4.0 * std::max(std::abs(sys.domain.lo), std::abs(sys.domain.hi));
}

struct Rhs {
  const NumericSystem* sys;
  void operator()(const State& s, State& ds, double /*t*/) const { ds = vector_field(*sys, s); }
};

using Dopri = odeint::runge_kutta_dopri5<State>;

void check_state(const State& s, double radius) {
  if (!std::isfinite(s[0]) || !std::isfinite(s[1])) throw Escaped("orbit state became non-finite");
  if (std::abs(s[0]) > radius) throw Escaped("orbit left the escape radius");
}

double energy_of(const NumericSystem& sys, double x0) {
  using boost::math::quadrature::gauss_kronrod;
  if (sys.f_zero) return gauss_kronrod<double, 31>::integrate(sys.h, 0.0, x0, 10, 1e-12);
  const auto F = [&](double x) { return gauss_kronrod<double, 15>::integrate(sys.f, 0.0, x, 10, 1e-12); };
  return gauss_kronrod<double, 15>::integrate([&](double x) { return sys.h(x) * std::exp(2.0 * F(x)); }, 0.0, x0,
                                              10, 1e-12);
}

}  // namespace

void Trajectory::push(double t, const State& s, const State& ds) {
  t_.push_back(t);
  s_.push_back(s);
  ds_.push_back(ds);
}

State Trajectory::at(double t) const {
  if (t_.empty()) throw std::out_of_range("empty trajectory");
  if (t <= t_.front()) return s_.front();
  if (t >= t_.back()) return s_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double h = t_[i + 1] - t_[i];
  const double u = (t - t_[i]) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  State r{};
  for (std::size_t k = 0; k < 2; ++k) {
    r[k] = h00 * s_[i][k] + h10 * h * ds_[i][k] + h01 * s_[i + 1][k] + h11 * h * ds_[i + 1][k];
  }
  return r;
}

State vector_field(const NumericSystem& sys, const State& s) {
  const double x = s[0], y = s[1];
  double dy = -sys.h(x);
  if (!sys.g_zero) dy -= sys.g(x) * y;
  if (!sys.f_zero) dy -= sys.f(x) * y * y;
  return {y, dy};
}

Trajectory integrate_orbit(const NumericSystem& sys, double x0, double t_max, double tol, const OrbitOptions& opts) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw std::invalid_argument("integrator tolerance must lie in [1e-13, 1e-6]");
  const double radius = escape_radius(sys, opts);
  const Rhs rhs{&sys};
  auto stepper = odeint::make_dense_output(tol, tol, opts.max_dt, Dopri());
  State s{x0, 0.0};
  Trajectory traj;
  traj.push(0.0, s, vector_field(sys, s));
  stepper.initialize(s, 0.0, 1e-3);
  try {
    while (stepper.current_time() < t_max) {
      stepper.do_step(rhs);
      const State& cur = stepper.current_state();
      check_state(cur, radius);
      if (stepper.current_time_step() < 1e-14) throw StepUnderflow("step size underflow");
      traj.push(stepper.current_time(), cur, vector_field(sys, cur));
    }
  } catch (const odeint::odeint_error& e) {
    throw StepUnderflow(e.what());
  }
  return traj;
}

ReturnResult return_period(const NumericSystem& sys, double x0, const OrbitOptions& opts) {
  if (x0 == 0.0) throw std::invalid_argument("return_period: amplitude must be nonzero");
  const double radius = escape_radius(sys, opts);
  const Rhs rhs{&sys};
  const State start{x0, 0.0};
  const double dir = vector_field(sys, start)[1] < 0.0 ? -1.0 : 1.0;
  auto stepper = odeint::make_dense_output(opts.tol, opts.tol, opts.max_dt, Dopri());
  stepper.initialize(start, 0.0, 1e-3);
  State prev = start;
  double t_prev = 0.0;
  try {
    while (stepper.current_time() < opts.t_max) {
      stepper.do_step(rhs);
      const State cur = stepper.current_state();
      check_state(cur, radius);
      if (stepper.current_time_step() < 1e-14) throw StepUnderflow("step size underflow");
      const bool crossed = prev[1] * dir < 0.0 && cur[1] * dir >= 0.0 && cur[0] * x0 > 0.0;
      if (crossed) {
        State tmp;
        const auto ycross = [&](double t) {
          stepper.calc_state(t, tmp);
          return tmp[1];
        };
        std::uintmax_t iters = 100;
        const auto [lo, hi] = boost::math::tools::toms748_solve(ycross, t_prev, stepper.current_time(), prev[1], cur[1],
                                                                boost::math::tools::eps_tolerance<double>(50), iters);
        double T = 0.5 * (lo + hi);
        // Re-integrate from the last accepted step and polish T by Newton.
        State s_end{};
        for (int k = 0; k < 3; ++k) {
          s_end = prev;
          odeint::integrate_adaptive(odeint::make_controlled(opts.tol * 0.1, opts.tol * 0.1, Dopri()), rhs, s_end,
                                     t_prev, T, std::min(1e-3, (T - t_prev) / 4 + 1e-16));
          const double ydot = vector_field(sys, s_end)[1];
          if (ydot == 0.0) break;
          const double dT = -s_end[1] / ydot;
          T += dT;
          if (std::abs(dT) < 1e-15 * T) break;
        }
        ReturnResult r;
        r.period = T;
        r.closure_error = std::hypot(s_end[0] - x0, s_end[1]);
        return r;
      }
      prev = cur;
      t_prev = stepper.current_time();
    }
  } catch (const odeint::odeint_error& e) {
    throw StepUnderflow(e.what());
  }
  throw NoReturn("no return to the section within t_max");
}

double period_quadrature(const Potential& pot, double c) {
  const auto [a, b] = turning_points(pot, c);
  return std::numbers::sqrt2 * well_integral(pot, a, b, [](double) { return 1.0; }, 1e-12);
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::escaped: return "escaped";
    case RowStatus::no_return: return "no_return";
    case RowStatus::singular: return "singular";
    case RowStatus::open: return "open";
  }
  return "unknown";
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::constant: return "constant";
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::non_monotone: return "non-monotone";
    case Monotonicity::undetermined: return "undetermined";
  }
  return "unknown";
}

RowStatus row_status_from_string(const std::string& s) {
  for (RowStatus v : {RowStatus::ok, RowStatus::escaped, RowStatus::no_return, RowStatus::singular, RowStatus::open}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown row status: " + s);
}

Monotonicity monotonicity_from_string(const std::string& s) {
  for (Monotonicity v : {Monotonicity::constant, Monotonicity::increasing, Monotonicity::decreasing,
                         Monotonicity::non_monotone, Monotonicity::undetermined}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown monotonicity: " + s);
}

std::vector<double> default_amplitudes(const Interval& domain) {
  const double hi = 0.8 * domain.radius();
  const double lo = std::min(0.05, 0.5 * hi);
  std::vector<double> a(8);
  for (int i = 0; i < 8; ++i) a[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / 7.0);
  return a;
}

namespace {

ScanRow scan_row(const NumericSystem& sys, double x0, const ScanOptions& opts, bool potential) {
  ScanRow row;
  row.amplitude = x0;
  try {
    if (sys.g_zero) row.energy = energy_of(sys, x0);
  } catch (const std::exception&) {
  }
  try {
    const ReturnResult r = return_period(sys, x0, opts.orbit);
    row.period = r.period;
    row.closure_error = r.closure_error;
    row.status = r.closure_error < opts.closure_tol ? RowStatus::ok : RowStatus::open;
  } catch (const Escaped& e) {
    row.status = RowStatus::escaped;
    row.message = e.what();
  } catch (const NoReturn& e) {
    row.status = RowStatus::no_return;
    row.message = e.what();
  } catch (const StepUnderflow& e) {
    row.status = RowStatus::singular;
    row.message = e.what();
  } catch (const DomainError& e) {
    row.status = RowStatus::singular;
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = RowStatus::singular;
    row.message = e.what();
  }
  if (potential && row.energy && x0 > 0.0) {
    try {
      row.quadrature_period = period_quadrature(Potential(sys.h), *row.energy);
    } catch (const std::exception& e) {
      if (!row.message.empty()) row.message += "; ";
      row.message += std::string("quadrature: ") + e.what();
    }
  }
  return row;
}

}  // namespace

Monotonicity classify(const std::vector<ScanRow>& rows, double tol) {
  std::vector<double> T;
  for (const ScanRow& r : rows) {
    if (r.status == RowStatus::ok) T.push_back(r.period);
  }
  if (T.size() < 2) return Monotonicity::undetermined;
  const auto [mn, mx] = std::minmax_element(T.begin(), T.end());
  if (*mx - *mn <= tol) return Monotonicity::constant;
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < T.size(); ++i) {
    const double d = T[i] - T[i - 1];
    if (d < -tol) inc = false;
    if (d > tol) dec = false;
  }
  if (inc) return Monotonicity::increasing;
  if (dec) return Monotonicity::decreasing;
  return Monotonicity::non_monotone;
}

PeriodScan period_scan(const NumericSystem& sys, const std::vector<double>& amplitudes, const ScanOptions& opts) {
  std::vector<double> amps = amplitudes;
  std::sort(amps.begin(), amps.end());
  const bool potential = opts.quadrature && sys.f_zero && sys.g_zero;

  PeriodScan scan;
  scan.method = potential ? "ode_return+quadrature" : "ode_return";
  scan.integrator_tol = opts.orbit.tol;
  scan.closure_tol = opts.closure_tol;
  scan.constancy_tol = opts.constancy_tol;
  scan.rows.resize(amps.size());

  unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(amps.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < amps.size(); i = next++) scan.rows[i] = scan_row(sys, amps[i], opts, potential);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (const ScanRow& r : scan.rows) {
    if (r.status != RowStatus::ok) continue;
    const double d = std::abs(r.period - kTwoPi);
    scan.max_deviation = scan.max_deviation ? std::max(*scan.max_deviation, d) : d;
  }
  scan.monotonicity = classify(scan.rows, opts.constancy_tol);
  return scan;
}

std::optional<LadderDeviation> deviation_at_largest(const NumericSystem& sys, std::vector<double> ladder,
                                                    const OrbitOptions& opts, double closure_tol) {
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  for (double x0 : ladder) {
    try {
      const ReturnResult r = return_period(sys, x0, opts);
      return LadderDeviation{x0, std::abs(r.period - kTwoPi),
                             r.closure_error < closure_tol ? RowStatus::ok : RowStatus::open};
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

}  // namespace isochron
