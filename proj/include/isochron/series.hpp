#pragma once

// Truncated power series at 0 with double coefficients.
//
// A PowerSeries of order N stores c_0..c_N and stands for
// c_0 + c_1 x + ... + c_N x^N + O(x^{N+1}). Binary operations work at the
// smaller of the two orders. Operations that lose information (division by a
// power of x, differentiation, square roots of even-leading series) lower
// the recorded order accordingly, so a coefficient is only ever reported
// when it is determined by the inputs.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isochron {

constexpr int kDefaultOrder = 24;

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZeroConstantTerm : public SeriesError {
 public:
  DivisionByZeroConstantTerm() : SeriesError("series division: constant term of divisor is zero") {}
};

class NonzeroInnerConstant : public SeriesError {
 public:
  NonzeroInnerConstant() : SeriesError("series composition: inner series has nonzero constant term") {}
};

class NotInvertible : public SeriesError {
 public:
  NotInvertible() : SeriesError("series reversion: linear coefficient is zero") {}
};

class InvalidBranch : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

class ValuationError : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

// Relative tolerance against coefficient magnitudes with an absolute floor.
struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;

  double threshold(double scale) const { return std::max(rel * scale, abs); }
};

class PowerSeries {
 public:
  PowerSeries() : coeffs_(1, 0.0) {}
  explicit PowerSeries(int order);
  explicit PowerSeries(std::vector<double> coeffs);

  static PowerSeries constant(double c, int order);
  static PowerSeries identity(int order);
  static PowerSeries monomial(double c, int power, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }

  // Zero beyond the truncation order.
  double coeff(int k) const { return k >= 0 && k <= order() ? (*this)[k] : 0.0; }

  PowerSeries truncated(int order) const;
  double max_abs() const;
  // Index of the first coefficient with |c_k| > threshold, or order()+1.
  int valuation(double threshold = 0.0) const;
  bool is_zero(double threshold = 0.0) const { return valuation(threshold) > order(); }
  double eval(double x) const;

  PowerSeries& operator+=(const PowerSeries& other);
  PowerSeries& operator-=(const PowerSeries& other);
  PowerSeries& operator*=(double s);

 private:
  std::vector<double> coeffs_;
};

PowerSeries operator-(const PowerSeries& a);
PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator/(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(double s, const PowerSeries& a);
PowerSeries operator*(const PowerSeries& a, double s);
PowerSeries operator+(const PowerSeries& a, double c);
PowerSeries operator+(double c, const PowerSeries& a);
PowerSeries operator-(const PowerSeries& a, double c);
PowerSeries operator-(double c, const PowerSeries& a);
PowerSeries operator/(double c, const PowerSeries& a);
PowerSeries operator/(const PowerSeries& a, double s);

enum class ArithKind { add, sub, mul, div, scale };

// Dispatching form of the ring operations; for scale, b[0] is the factor.
PowerSeries arith(const PowerSeries& a, const PowerSeries& b, ArithKind kind);

PowerSeries pow(const PowerSeries& p, int n);

// Multiply by x^k (order grows by k) / divide by x^k (order shrinks by k).
// shift_down throws ValuationError when a dropped coefficient exceeds
// the threshold.
PowerSeries shift_up(const PowerSeries& p, int k);
PowerSeries shift_down(const PowerSeries& p, int k, double threshold = 0.0);

// a / b where b may vanish at 0: cancels the valuation of b from both sides.
// Coefficients below tol (relative to each operand's max) count as zero.
PowerSeries divide_cancelling(const PowerSeries& a, const PowerSeries& b,
                              Tolerance tol = {1e-12, 1e-300});

PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner);
PowerSeries revert(const PowerSeries& p);

PowerSeries integrate(const PowerSeries& p);
PowerSeries differentiate(const PowerSeries& p);

PowerSeries exp(const PowerSeries& p);
PowerSeries log(const PowerSeries& p);
// p_0 > 0, or p = c x^{2m} + ... with c > 0 (returns the branch with positive
// leading coefficient, order N - m).
PowerSeries sqrt(const PowerSeries& p, Tolerance tol = {1e-12, 1e-300});
PowerSeries sin(const PowerSeries& p);
PowerSeries cos(const PowerSeries& p);
PowerSeries sinh(const PowerSeries& p);
PowerSeries cosh(const PowerSeries& p);
PowerSeries tanh(const PowerSeries& p);
PowerSeries asinh(const PowerSeries& p);

enum class ElementaryKind { exp, log, sqrt };
PowerSeries elementary(const PowerSeries& p, ElementaryKind kind);

enum class CalculusKind { integrate, differentiate };
PowerSeries calculus(const PowerSeries& p, CalculusKind kind);

struct ParityParts {
  PowerSeries odd_part;
  PowerSeries even_part;
  // max |even coefficient| / max |coefficient|; 0 for the zero series.
  double odd_residual = 0.0;
  // max |odd coefficient| / max |coefficient|.
  double even_residual = 0.0;
};

ParityParts parity(const PowerSeries& p);

// Per-order comparison thresholds: tol.threshold(M_k) where M_k is the
// largest coefficient magnitude of any operand at orders <= k.
std::vector<double> prefix_thresholds(std::initializer_list<const PowerSeries*> operands,
                                      int order, Tolerance tol);

std::string to_string(const PowerSeries& p, int precision = 6);

}  // namespace isochron
