#pragma once

// Closed-form functions of one real variable x.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)?        exponent: integer-valued, right-assoc
//   primary := number | 'x' | name '(' expr ')' | '(' expr ')'
//   name    := exp | ln | log | sqrt | sin | cos | sinh | cosh | tanh | asinh | arcsinh
// Rationals are written as quotients, e.g. 1/9.

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include "isochron/jet.hpp"
#include "isochron/series.hpp"

namespace isochron {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, std::string expected)
      : std::runtime_error("syntax error at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class UnaryOp { neg, exp, ln, sqrt, sin, cos, sinh, cosh, tanh, asinh };
enum class BinaryOp { add, sub, mul, div };
enum class NodeKind { constant, variable, unary, binary, power };

struct Node;

class FunctionExpr {
 public:
  FunctionExpr();

  static FunctionExpr constant(double c);
  static FunctionExpr variable();
  static FunctionExpr unary(UnaryOp op, const FunctionExpr& arg);
  static FunctionExpr binary(BinaryOp op, const FunctionExpr& lhs, const FunctionExpr& rhs);
  static FunctionExpr power(const FunctionExpr& base, int exponent);

  explicit FunctionExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  const std::shared_ptr<const Node>& ptr() const { return node_; }

  bool is_constant() const;
  bool is_constant(double c) const;
  double constant_value() const;
  // Only + - * by polynomials, nonnegative integer powers and division by constants.
  bool is_polynomial() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  int exponent = 0;
  UnaryOp unary_op = UnaryOp::neg;
  BinaryOp binary_op = BinaryOp::add;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  FunctionExpr left() const { return FunctionExpr(lhs); }
  FunctionExpr right() const { return FunctionExpr(rhs); }
};

FunctionExpr parse(std::string_view text);
std::string to_string(const FunctionExpr& e);

// Builders with constant folding and 0/1 identities.
FunctionExpr operator+(const FunctionExpr& a, const FunctionExpr& b);
FunctionExpr operator-(const FunctionExpr& a, const FunctionExpr& b);
FunctionExpr operator*(const FunctionExpr& a, const FunctionExpr& b);
FunctionExpr operator/(const FunctionExpr& a, const FunctionExpr& b);
FunctionExpr operator-(const FunctionExpr& a);
FunctionExpr operator+(const FunctionExpr& a, double c);
FunctionExpr operator*(double c, const FunctionExpr& a);
FunctionExpr pow(const FunctionExpr& a, int n);
FunctionExpr exp(const FunctionExpr& a);
FunctionExpr ln(const FunctionExpr& a);
FunctionExpr sqrt(const FunctionExpr& a);
FunctionExpr sin(const FunctionExpr& a);
FunctionExpr cos(const FunctionExpr& a);
FunctionExpr sinh(const FunctionExpr& a);
FunctionExpr cosh(const FunctionExpr& a);
FunctionExpr tanh(const FunctionExpr& a);
FunctionExpr asinh(const FunctionExpr& a);

// outer(inner(x)).
FunctionExpr substitute(const FunctionExpr& outer, const FunctionExpr& inner);
FunctionExpr derivative(const FunctionExpr& e);

namespace detail {

inline double primal(double x) { return x; }
inline double primal(const Jet& x) { return x.v; }

template <class T>
T lift(double c) {
  if constexpr (std::is_same_v<T, Jet>) return Jet::constant(c);
  else return c;
}

template <class T>
T check_finite(const T& r) {
  if (!std::isfinite(primal(r))) throw DomainError("evaluation produced a non-finite value");
  return r;
}

template <class T>
T apply_unary(UnaryOp op, const T& a) {
  using std::asinh, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tanh;
  switch (op) {
    case UnaryOp::neg: return -a;
    case UnaryOp::exp: return check_finite(exp(a));
    case UnaryOp::ln:
      if (!(primal(a) > 0.0)) throw DomainError("ln of a non-positive value");
      return log(a);
    case UnaryOp::sqrt:
      if (primal(a) < 0.0) throw DomainError("sqrt of a negative value");
      return check_finite(sqrt(a));
    case UnaryOp::sin: return sin(a);
    case UnaryOp::cos: return cos(a);
    case UnaryOp::sinh: return check_finite(sinh(a));
    case UnaryOp::cosh: return check_finite(cosh(a));
    case UnaryOp::tanh: return tanh(a);
    case UnaryOp::asinh: return asinh(a);
  }
  return a;
}

template <class T>
T evaluate_node(const Node& n, const T& x) {
  switch (n.kind) {
    case NodeKind::constant: return lift<T>(n.value);
    case NodeKind::variable: return x;
    case NodeKind::unary: return apply_unary(n.unary_op, evaluate_node(*n.lhs, x));
    case NodeKind::power: {
      const T b = evaluate_node(*n.lhs, x);
      if (n.exponent < 0 && primal(b) == 0.0) throw DomainError("negative power of zero");
      return check_finite(powi(b, n.exponent));
    }
    case NodeKind::binary: {
      const T a = evaluate_node(*n.lhs, x);
      const T b = evaluate_node(*n.rhs, x);
      switch (n.binary_op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
          if (primal(b) == 0.0) throw DomainError("division by zero");
          return check_finite(a / b);
      }
    }
  }
  return x;
}

}  // namespace detail

// Point evaluation; T is double or Jet. Throws DomainError outside the
// expression's real domain.
template <class T>
T evaluate(const FunctionExpr& e, const T& x) {
  return detail::evaluate_node(e.node(), x);
}

struct EvalResult {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

EvalResult eval(const FunctionExpr& e, double x, int deriv_order = 0);

// Taylor coefficients at 0 up to x^order. Throws DomainError when e is not
// analytic at 0 (e.g. ln(x), 1/x, sqrt(x^2)).
PowerSeries taylor(const FunctionExpr& e, int order = kDefaultOrder);

// Numeric evaluation that falls back on the Taylor polynomial at and very
// near 0, where closed forms such as B(x)^2/sinh(x)^3 are 0/0.
class Evaluator {
 public:
  explicit Evaluator(FunctionExpr e, int order = kDefaultOrder);

  double operator()(double x) const;
  const FunctionExpr& expr() const { return expr_; }
  const std::optional<PowerSeries>& series() const { return series_; }

 private:
  FunctionExpr expr_;
  std::optional<PowerSeries> series_;
};

}  // namespace isochron
