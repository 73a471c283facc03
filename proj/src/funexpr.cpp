#include "isochron/funexpr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace isochron {

namespace {

std::shared_ptr<const Node> make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FunctionExpr parse_all() {
    FunctionExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "operator or end of input");
    return e;
  }

 private:
  static constexpr const char* kOperand = "number, x, function name or '('";

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  FunctionExpr expr() {
    FunctionExpr lhs = term();
    for (;;) {
      if (accept('+')) lhs = lhs + term();
      else if (accept('-')) lhs = lhs - term();
      else return lhs;
    }
  }

  FunctionExpr term() {
    FunctionExpr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = lhs * unary();
      else if (accept('/')) lhs = lhs / unary();
      else return lhs;
    }
  }

  FunctionExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  FunctionExpr power() {
    FunctionExpr base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    FunctionExpr exponent = unary();
    if (!exponent.is_constant()) throw SyntaxError(at, "constant integer exponent");
    const double v = exponent.constant_value();
    if (v != std::floor(v) || std::abs(v) > 1e6) throw SyntaxError(at, "integer exponent");
    return pow(base, static_cast<int>(v));
  }

  FunctionExpr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, kOperand);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      FunctionExpr e = expr();
      if (!accept(')')) throw SyntaxError(pos_, "')'");
      return e;
    }
    throw SyntaxError(pos_, kOperand);
  }

  FunctionExpr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    if (lexeme == ".") throw SyntaxError(start, "number");
    return FunctionExpr::constant(std::strtod(lexeme.c_str(), nullptr));
  }

  FunctionExpr identifier() {
    static const std::map<std::string, UnaryOp, std::less<>> kFunctions = {
        {"exp", UnaryOp::exp},     {"ln", UnaryOp::ln},       {"log", UnaryOp::ln},
        {"sqrt", UnaryOp::sqrt},   {"sin", UnaryOp::sin},     {"cos", UnaryOp::cos},
        {"sinh", UnaryOp::sinh},   {"cosh", UnaryOp::cosh},   {"tanh", UnaryOp::tanh},
        {"asinh", UnaryOp::asinh}, {"arcsinh", UnaryOp::asinh}};
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return FunctionExpr::variable();
    const auto it = kFunctions.find(name);
    if (it == kFunctions.end()) throw SyntaxError(start, "x or a known function name");
    if (!accept('(')) throw SyntaxError(pos_, "'(' after function name");
    FunctionExpr arg = expr();
    if (!accept(')')) throw SyntaxError(pos_, "')'");
    return FunctionExpr::unary(it->second, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::constant: return n.value < 0 ? 3 : 5;
    case NodeKind::variable: return 5;
    case NodeKind::power: return 4;
    case NodeKind::unary: return n.unary_op == UnaryOp::neg ? 3 : 5;
    case NodeKind::binary:
      return n.binary_op == BinaryOp::add || n.binary_op == BinaryOp::sub ? 1 : 2;
  }
  return 0;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int digits = 1; digits < 17; ++digits) {
    char trial[64];
    std::snprintf(trial, sizeof trial, "%.*g", digits, v);
    if (std::strtod(trial, nullptr) == v) return trial;
  }
  return buf;
}

std::string print(const Node& n);

std::string print_child(const Node& child, int min_prec) {
  std::string s = print(child);
  return precedence(child) < min_prec ? "(" + s + ")" : s;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::exp: return "exp";
    case UnaryOp::ln: return "ln";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::sinh: return "sinh";
    case UnaryOp::cosh: return "cosh";
    case UnaryOp::tanh: return "tanh";
    case UnaryOp::asinh: return "asinh";
  }
  return "?";
}

std::string print(const Node& n) {
  switch (n.kind) {
    case NodeKind::constant: return format_number(n.value);
    case NodeKind::variable: return "x";
    case NodeKind::power: return print_child(*n.lhs, 5) + "^" + std::to_string(n.exponent);
    case NodeKind::unary:
      if (n.unary_op == UnaryOp::neg) return "-" + print_child(*n.lhs, 3);
      return std::string(unary_name(n.unary_op)) + "(" + print(*n.lhs) + ")";
    case NodeKind::binary: {
      switch (n.binary_op) {
        case BinaryOp::add: return print_child(*n.lhs, 1) + " + " + print_child(*n.rhs, 2);
        case BinaryOp::sub: return print_child(*n.lhs, 1) + " - " + print_child(*n.rhs, 2);
        case BinaryOp::mul: return print_child(*n.lhs, 2) + "*" + print_child(*n.rhs, 3);
        case BinaryOp::div: return print_child(*n.lhs, 2) + "/" + print_child(*n.rhs, 3);
      }
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Taylor expansion by structural recursion

PowerSeries taylor_node(const Node& n, int order) {
  switch (n.kind) {
    case NodeKind::constant: return PowerSeries::constant(n.value, order);
    case NodeKind::variable: return PowerSeries::identity(order);
    case NodeKind::power: {
      PowerSeries b = taylor_node(*n.lhs, order);
      if (n.exponent >= 0) return pow(b, n.exponent);
      return divide_cancelling(PowerSeries::constant(1.0, b.order()), pow(b, -n.exponent));
    }
    case NodeKind::unary: {
      PowerSeries a = taylor_node(*n.lhs, order);
      switch (n.unary_op) {
        case UnaryOp::neg: return -a;
        case UnaryOp::exp: return exp(a);
        case UnaryOp::ln:
          if (!(a[0] > 0.0)) throw DomainError("ln is not analytic at 0 for this argument");
          return log(a);
        case UnaryOp::sqrt:
          // sqrt(c x^2m ...) is |.|-like at 0, not analytic.
          if (!(a[0] > 0.0)) throw DomainError("sqrt is not analytic at 0 for this argument");
          return sqrt(a);
        case UnaryOp::sin: return sin(a);
        case UnaryOp::cos: return cos(a);
        case UnaryOp::sinh: return sinh(a);
        case UnaryOp::cosh: return cosh(a);
        case UnaryOp::tanh: return tanh(a);
        case UnaryOp::asinh: return asinh(a);
      }
      break;
    }
    case NodeKind::binary: {
      PowerSeries a = taylor_node(*n.lhs, order);
      PowerSeries b = taylor_node(*n.rhs, order);
      switch (n.binary_op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return divide_cancelling(a, b);
      }
    }
  }
  throw DomainError("unsupported node");
}

}  // namespace

// ---------------------------------------------------------------------------
// FunctionExpr

FunctionExpr::FunctionExpr() : node_(make_node(Node{})) {}

FunctionExpr FunctionExpr::constant(double c) {
  Node n;
  n.kind = NodeKind::constant;
  n.value = c;
  return FunctionExpr(make_node(n));
}

FunctionExpr FunctionExpr::variable() {
  Node n;
  n.kind = NodeKind::variable;
  return FunctionExpr(make_node(n));
}

FunctionExpr FunctionExpr::unary(UnaryOp op, const FunctionExpr& arg) {
  Node n;
  n.kind = NodeKind::unary;
  n.unary_op = op;
  n.lhs = arg.ptr();
  return FunctionExpr(make_node(n));
}

FunctionExpr FunctionExpr::binary(BinaryOp op, const FunctionExpr& lhs, const FunctionExpr& rhs) {
  Node n;
  n.kind = NodeKind::binary;
  n.binary_op = op;
  n.lhs = lhs.ptr();
  n.rhs = rhs.ptr();
  return FunctionExpr(make_node(n));
}

FunctionExpr FunctionExpr::power(const FunctionExpr& base, int exponent) {
  Node n;
  n.kind = NodeKind::power;
  n.exponent = exponent;
  n.lhs = base.ptr();
  return FunctionExpr(make_node(n));
}

bool FunctionExpr::is_constant() const { return node_->kind == NodeKind::constant; }
bool FunctionExpr::is_constant(double c) const { return is_constant() && node_->value == c; }
double FunctionExpr::constant_value() const { return node_->value; }

bool FunctionExpr::is_polynomial() const {
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::constant:
    case NodeKind::variable: return true;
    case NodeKind::power: return n.exponent >= 0 && n.left().is_polynomial();
    case NodeKind::unary: return n.unary_op == UnaryOp::neg && n.left().is_polynomial();
    case NodeKind::binary:
      if (n.binary_op == BinaryOp::div) return n.left().is_polynomial() && n.right().is_constant();
      return n.left().is_polynomial() && n.right().is_polynomial();
  }
  return false;
}

FunctionExpr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const FunctionExpr& e) { return print(e.node()); }

FunctionExpr operator+(const FunctionExpr& a, const FunctionExpr& b) {
  if (a.is_constant() && b.is_constant()) return FunctionExpr::constant(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return FunctionExpr::binary(BinaryOp::add, a, b);
}

FunctionExpr operator-(const FunctionExpr& a, const FunctionExpr& b) {
  if (a.is_constant() && b.is_constant()) return FunctionExpr::constant(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return FunctionExpr::binary(BinaryOp::sub, a, b);
}

FunctionExpr operator*(const FunctionExpr& a, const FunctionExpr& b) {
  if (a.is_constant() && b.is_constant()) return FunctionExpr::constant(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return FunctionExpr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return FunctionExpr::binary(BinaryOp::mul, a, b);
}

FunctionExpr operator/(const FunctionExpr& a, const FunctionExpr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0) {
    return FunctionExpr::constant(a.constant_value() / b.constant_value());
  }
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return a;
  return FunctionExpr::binary(BinaryOp::div, a, b);
}

FunctionExpr operator-(const FunctionExpr& a) {
  if (a.is_constant()) return FunctionExpr::constant(-a.constant_value());
  if (a.node().kind == NodeKind::unary && a.node().unary_op == UnaryOp::neg) return a.node().left();
  return FunctionExpr::unary(UnaryOp::neg, a);
}

FunctionExpr operator+(const FunctionExpr& a, double c) { return a + FunctionExpr::constant(c); }
FunctionExpr operator*(double c, const FunctionExpr& a) { return FunctionExpr::constant(c) * a; }

FunctionExpr pow(const FunctionExpr& a, int n) {
  if (n == 0) return FunctionExpr::constant(1.0);
  if (n == 1) return a;
  if (a.is_constant() && (n > 0 || a.constant_value() != 0.0)) {
    return FunctionExpr::constant(std::pow(a.constant_value(), n));
  }
  return FunctionExpr::power(a, n);
}

FunctionExpr exp(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::exp, a); }
FunctionExpr ln(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::ln, a); }
FunctionExpr sqrt(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::sqrt, a); }
FunctionExpr sin(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::sin, a); }
FunctionExpr cos(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::cos, a); }
FunctionExpr sinh(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::sinh, a); }
FunctionExpr cosh(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::cosh, a); }
FunctionExpr tanh(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::tanh, a); }
FunctionExpr asinh(const FunctionExpr& a) { return FunctionExpr::unary(UnaryOp::asinh, a); }

FunctionExpr substitute(const FunctionExpr& outer, const FunctionExpr& inner) {
  const Node& n = outer.node();
  switch (n.kind) {
    case NodeKind::constant: return outer;
    case NodeKind::variable: return inner;
    case NodeKind::power: return pow(substitute(n.left(), inner), n.exponent);
    case NodeKind::unary: {
      FunctionExpr a = substitute(n.left(), inner);
      return n.unary_op == UnaryOp::neg ? -a : FunctionExpr::unary(n.unary_op, a);
    }
    case NodeKind::binary: {
      FunctionExpr a = substitute(n.left(), inner);
      FunctionExpr b = substitute(n.right(), inner);
      switch (n.binary_op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return a / b;
      }
    }
  }
  return outer;
}

FunctionExpr derivative(const FunctionExpr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::constant: return FunctionExpr::constant(0.0);
    case NodeKind::variable: return FunctionExpr::constant(1.0);
    case NodeKind::power: {
      const FunctionExpr a = n.left();
      return static_cast<double>(n.exponent) * pow(a, n.exponent - 1) * derivative(a);
    }
    case NodeKind::unary: {
      const FunctionExpr a = n.left();
      const FunctionExpr da = derivative(a);
      switch (n.unary_op) {
        case UnaryOp::neg: return -da;
        case UnaryOp::exp: return e * da;
        case UnaryOp::ln: return da / a;
        case UnaryOp::sqrt: return da / (2.0 * e);
        case UnaryOp::sin: return cos(a) * da;
        case UnaryOp::cos: return -(sin(a) * da);
        case UnaryOp::sinh: return cosh(a) * da;
        case UnaryOp::cosh: return sinh(a) * da;
        case UnaryOp::tanh: return da / pow(cosh(a), 2);
        case UnaryOp::asinh: return da / sqrt(pow(a, 2) + 1.0);
      }
      break;
    }
    case NodeKind::binary: {
      const FunctionExpr a = n.left();
      const FunctionExpr b = n.right();
      switch (n.binary_op) {
        case BinaryOp::add: return derivative(a) + derivative(b);
        case BinaryOp::sub: return derivative(a) - derivative(b);
        case BinaryOp::mul: return derivative(a) * b + a * derivative(b);
        case BinaryOp::div:
          if (b.is_constant()) return derivative(a) / b;
          return (derivative(a) * b - a * derivative(b)) / pow(b, 2);
      }
    }
  }
  return FunctionExpr::constant(0.0);
}

EvalResult eval(const FunctionExpr& e, double x, int deriv_order) {
  if (deriv_order < 0 || deriv_order > 2) throw std::invalid_argument("deriv_order must be 0, 1 or 2");
  if (deriv_order == 0) return {evaluate(e, x), 0.0, 0.0};
  const Jet j = evaluate(e, Jet::variable(x));
  if (!std::isfinite(j.d1) || !std::isfinite(j.d2)) throw DomainError("derivative is not finite");
  return {j.v, j.d1, deriv_order == 2 ? j.d2 : 0.0};
}

PowerSeries taylor(const FunctionExpr& e, int order) {
  // Divisions by vanishing series cost orders; work with headroom.
  for (int pad = 8; pad <= 64; pad *= 2) {
    try {
      PowerSeries p = taylor_node(e.node(), order + pad);
      if (p.order() >= order) return p.truncated(order);
    } catch (const DomainError&) {
      throw;
    } catch (const SeriesError& err) {
      throw DomainError(std::string("not analytic at 0: ") + err.what());
    }
  }
  throw DomainError("taylor: could not reach the requested order");
}

Evaluator::Evaluator(FunctionExpr e, int order) : expr_(std::move(e)) {
  try {
    series_ = taylor(expr_, order);
  } catch (const DomainError&) {
    series_.reset();
  }
}

double Evaluator::operator()(double x) const {
  if (series_ && std::abs(x) < 1e-6) return series_->eval(x);
  try {
    return evaluate(expr_, x);
  } catch (const DomainError&) {
    if (series_ && std::abs(x) < 1e-3) return series_->eval(x);
    throw;
  }
}

}  // namespace isochron
