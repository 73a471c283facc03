#pragma once

#include <cmath>

namespace isochron {

// Second-order forward-mode number: value with first and second derivative
// along one direction.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
  static constexpr Jet constant(double c) { return {c, 0.0, 0.0}; }
};

// phi at the jet given phi(v), phi'(v), phi''(v).
constexpr Jet chain(const Jet& a, double f0, double f1, double f2) {
  return {f0, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2};
}

constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
constexpr Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
constexpr Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.d1, s * a.d2}; }

inline Jet reciprocal(const Jet& b) {
  const double r = 1.0 / b.v;
  return chain(b, r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, s, c, s);
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return chain(a, c, s, c);
}
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.v);
  const double sech2 = 1.0 - t * t;
  return chain(a, t, sech2, -2.0 * t * sech2);
}
inline Jet asinh(const Jet& a) {
  const double q = 1.0 + a.v * a.v;
  const double r = 1.0 / std::sqrt(q);
  return chain(a, std::asinh(a.v), r, -a.v * r / q);
}
inline Jet powi(const Jet& a, int n) {
  if (n == 0) return Jet::constant(1.0);
  const double p2 = n >= 2 || n < 0 ? n * (n - 1) * std::pow(a.v, n - 2) : 0.0;
  return chain(a, std::pow(a.v, n), n * std::pow(a.v, n - 1), p2);
}

inline double powi(double a, int n) { return std::pow(a, n); }

}  // namespace isochron
