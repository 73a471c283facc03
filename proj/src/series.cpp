#include "isochron/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isochron {

namespace {

constexpr double kMachineTol = 64 * std::numeric_limits<double>::epsilon();

void require_finite(const PowerSeries& p) {
  for (double c : p.coeffs()) {
    if (!std::isfinite(c)) throw SeriesError("series coefficient is not finite");
  }
}

// Recurrence shared by sin/cos and sinh/cosh: s' = c p', c' = sign * s p'.
void trig_pair(const PowerSeries& p, double sign, PowerSeries& s, PowerSeries& c) {
  const int n = p.order();
  s = PowerSeries(n);
  c = PowerSeries(n);
  if (sign < 0) {
    s[0] = std::sin(p[0]);
    c[0] = std::cos(p[0]);
  } else {
    s[0] = std::sinh(p[0]);
    c[0] = std::cosh(p[0]);
  }
  for (int k = 1; k <= n; ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * p[j] * c[k - j];
      cc += j * p[j] * s[k - j];
    }
    s[k] = ss / k;
    c[k] = sign * cc / k;
  }
}

}  // namespace

PowerSeries::PowerSeries(int order) : coeffs_(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0) {}

PowerSeries::PowerSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  require_finite(*this);
}

PowerSeries PowerSeries::constant(double c, int order) {
  PowerSeries p(order);
  p[0] = c;
  return p;
}

PowerSeries PowerSeries::identity(int order) { return monomial(1.0, 1, order); }

PowerSeries PowerSeries::monomial(double c, int power, int order) {
  PowerSeries p(order);
  if (power <= order) p[power] = c;
  return p;
}

PowerSeries PowerSeries::truncated(int order) const {
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + std::min(order, this->order()) + 1);
  return PowerSeries(std::move(c));
}

double PowerSeries::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

int PowerSeries::valuation(double threshold) const {
  for (int k = 0; k <= order(); ++k) {
    if (std::abs((*this)[k]) > threshold) return k;
  }
  return order() + 1;
}

double PowerSeries::eval(double x) const {
  double acc = 0.0;
  for (int k = order(); k >= 0; --k) acc = acc * x + (*this)[k];
  return acc;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& other) {
  *this = *this + other;
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& other) {
  *this = *this - other;
  return *this;
}

PowerSeries& PowerSeries::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

PowerSeries operator-(const PowerSeries& a) { return -1.0 * a; }

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  const int n = std::min(a.order(), b.order());
  PowerSeries r(n);
  for (int k = 0; k <= n; ++k) r[k] = a[k] + b[k];
  return r;
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
  const int n = std::min(a.order(), b.order());
  PowerSeries r(n);
  for (int k = 0; k <= n; ++k) r[k] = a[k] - b[k];
  return r;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  const int n = std::min(a.order(), b.order());
  PowerSeries r(n);
  for (int i = 0; i <= n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
  if (b[0] == 0.0 || !std::isfinite(b[0])) throw DivisionByZeroConstantTerm();
  const int n = std::min(a.order(), b.order());
  PowerSeries q(n);
  for (int k = 0; k <= n; ++k) {
    double acc = a[k];
    for (int j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return q;
}

PowerSeries operator*(double s, const PowerSeries& a) {
  PowerSeries r = a;
  r *= s;
  return r;
}

PowerSeries operator*(const PowerSeries& a, double s) { return s * a; }

PowerSeries operator+(const PowerSeries& a, double c) {
  PowerSeries r = a;
  r[0] += c;
  return r;
}

PowerSeries operator+(double c, const PowerSeries& a) { return a + c; }
PowerSeries operator-(const PowerSeries& a, double c) { return a + (-c); }
PowerSeries operator-(double c, const PowerSeries& a) { return (-a) + c; }

PowerSeries operator/(double c, const PowerSeries& a) { return PowerSeries::constant(c, a.order()) / a; }

PowerSeries operator/(const PowerSeries& a, double s) {
  if (s == 0.0 || !std::isfinite(s)) throw DivisionByZeroConstantTerm();
  return a * (1.0 / s);
}

PowerSeries arith(const PowerSeries& a, const PowerSeries& b, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return a + b;
    case ArithKind::sub: return a - b;
    case ArithKind::mul: return a * b;
    case ArithKind::div: return a / b;
    case ArithKind::scale: return b[0] * a;
  }
  return a;
}

PowerSeries pow(const PowerSeries& p, int n) {
  if (n < 0) return PowerSeries::constant(1.0, p.order()) / pow(p, -n);
  PowerSeries result = PowerSeries::constant(1.0, p.order());
  PowerSeries base = p;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

PowerSeries shift_up(const PowerSeries& p, int k) {
  PowerSeries r(p.order() + k);
  for (int i = 0; i <= p.order(); ++i) r[i + k] = p[i];
  return r;
}

PowerSeries shift_down(const PowerSeries& p, int k, double threshold) {
  if (k > p.order()) throw ValuationError("shift_down: shift exceeds truncation order");
  for (int i = 0; i < k; ++i) {
    if (std::abs(p[i]) > threshold) {
      throw ValuationError("shift_down: coefficient " + std::to_string(i) + " is nonzero");
    }
  }
  PowerSeries r(p.order() - k);
  for (int i = 0; i <= r.order(); ++i) r[i] = p[i + k];
  return r;
}

PowerSeries divide_cancelling(const PowerSeries& a, const PowerSeries& b, Tolerance tol) {
  const double tb = tol.threshold(b.max_abs());
  const int vb = b.valuation(tb);
  if (vb > b.order()) throw DivisionByZeroConstantTerm();
  if (vb == 0) return a / b;
  const double ta = tol.threshold(a.max_abs());
  return shift_down(a, vb, ta) / shift_down(b, vb, tb);
}

PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner) {
  if (inner[0] != 0.0) throw NonzeroInnerConstant();
  const int n = std::min(outer.order(), inner.order());
  PowerSeries in = inner.truncated(n);
  PowerSeries acc = PowerSeries::constant(outer[n], n);
  for (int k = n - 1; k >= 0; --k) acc = acc * in + outer[k];
  return acc;
}

PowerSeries revert(const PowerSeries& p) {
  if (p[0] != 0.0) throw NonzeroInnerConstant();
  const int n = p.order();
  if (n < 1 || std::abs(p[1]) <= kMachineTol * p.max_abs()) throw NotInvertible();
  PowerSeries q(n);
  q[1] = 1.0 / p[1];
  // Coefficient k of p(q) depends on q_k only through p_1 q_k.
  for (int k = 2; k <= n; ++k) {
    PowerSeries pq = compose(p, q.truncated(k));
    q[k] = -pq[k] / p[1];
  }
  return q;
}

PowerSeries integrate(const PowerSeries& p) {
  // The x^{N+1} term p_N/(N+1) is dropped so the order stays N.
  const int n = p.order();
  PowerSeries r(n);
  for (int k = 1; k <= n; ++k) r[k] = p[k - 1] / k;
  return r;
}

PowerSeries differentiate(const PowerSeries& p) {
  const int n = std::max(p.order() - 1, 0);
  PowerSeries r(n);
  for (int k = 0; k + 1 <= p.order(); ++k) r[k] = (k + 1) * p[k + 1];
  return r;
}

PowerSeries exp(const PowerSeries& p) {
  const int n = p.order();
  PowerSeries e(n);
  e[0] = std::exp(p[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * p[j] * e[k - j];
    e[k] = acc / k;
  }
  require_finite(e);
  return e;
}

PowerSeries log(const PowerSeries& p) {
  if (!(p[0] > 0.0)) throw InvalidBranch("series log: constant term must be positive");
  // p l' = p'  =>  k p_0 l_k = k p_k - sum_{j=1}^{k-1} j l_j p_{k-j}.
  const int n = p.order();
  PowerSeries l(n);
  l[0] = std::log(p[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = k * p[k];
    for (int j = 1; j < k; ++j) acc -= j * l[j] * p[k - j];
    l[k] = acc / (k * p[0]);
  }
  return l;
}

PowerSeries sqrt(const PowerSeries& p, Tolerance tol) {
  const double thr = tol.threshold(p.max_abs());
  const int v = p.valuation(thr);
  if (v > p.order()) return PowerSeries(p.order());
  if (v % 2 != 0) throw InvalidBranch("series sqrt: leading term has odd order " + std::to_string(v));
  if (p[v] < 0.0) throw InvalidBranch("series sqrt: leading coefficient is negative");
  PowerSeries base = v == 0 ? p : shift_down(p, v, thr);
  const int n = base.order();
  PowerSeries r(n);
  r[0] = std::sqrt(base[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = base[k];
    for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
    r[k] = acc / (2.0 * r[0]);
  }
  return v == 0 ? r : shift_up(r, v / 2);
}

PowerSeries sin(const PowerSeries& p) {
  PowerSeries s, c;
  trig_pair(p, -1.0, s, c);
  return s;
}

PowerSeries cos(const PowerSeries& p) {
  PowerSeries s, c;
  trig_pair(p, -1.0, s, c);
  return c;
}

PowerSeries sinh(const PowerSeries& p) {
  PowerSeries s, c;
  trig_pair(p, 1.0, s, c);
  return s;
}

PowerSeries cosh(const PowerSeries& p) {
  PowerSeries s, c;
  trig_pair(p, 1.0, s, c);
  return c;
}

PowerSeries tanh(const PowerSeries& p) {
  PowerSeries s, c;
  trig_pair(p, 1.0, s, c);
  return s / c;
}

PowerSeries asinh(const PowerSeries& p) {
  // asinh(p) = asinh(p_0) + integral of p' / sqrt(1 + p^2).
  const int n = p.order();
  PowerSeries dp = differentiate(p);
  PowerSeries root = sqrt(1.0 + p * p);
  PowerSeries integrand = dp / root.truncated(dp.order());
  PowerSeries r(n);
  r[0] = std::asinh(p[0]);
  for (int k = 1; k <= n; ++k) r[k] = integrand.coeff(k - 1) / k;
  return r;
}

PowerSeries elementary(const PowerSeries& p, ElementaryKind kind) {
  switch (kind) {
    case ElementaryKind::exp: return exp(p);
    case ElementaryKind::log: return log(p);
    case ElementaryKind::sqrt: return sqrt(p);
  }
  return p;
}

PowerSeries calculus(const PowerSeries& p, CalculusKind kind) {
  return kind == CalculusKind::integrate ? integrate(p) : differentiate(p);
}

ParityParts parity(const PowerSeries& p) {
  ParityParts out{PowerSeries(p.order()), PowerSeries(p.order())};
  double max_even = 0.0;
  double max_odd = 0.0;
  for (int k = 0; k <= p.order(); ++k) {
    if (k % 2 == 0) {
      out.even_part[k] = p[k];
      max_even = std::max(max_even, std::abs(p[k]));
    } else {
      out.odd_part[k] = p[k];
      max_odd = std::max(max_odd, std::abs(p[k]));
    }
  }
  const double scale = std::max(max_even, max_odd);
  if (scale > 0.0) {
    out.odd_residual = max_even / scale;
    out.even_residual = max_odd / scale;
  }
  return out;
}

std::vector<double> prefix_thresholds(std::initializer_list<const PowerSeries*> operands, int order,
                                      Tolerance tol) {
  std::vector<double> thr(static_cast<std::size_t>(order) + 1);
  double running = 0.0;
  for (int k = 0; k <= order; ++k) {
    for (const PowerSeries* s : operands) running = std::max(running, std::abs(s->coeff(k)));
    thr[static_cast<std::size_t>(k)] = tol.threshold(running);
  }
  return thr;
}

std::string to_string(const PowerSeries& p, int precision) {
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (int k = 0; k <= p.order(); ++k) {
    if (p[k] == 0.0) continue;
    if (!first) os << (p[k] < 0 ? " - " : " + ");
    else if (p[k] < 0) os << "-";
    first = false;
    const double a = std::abs(p[k]);
    if (k == 0) os << a;
    else {
      if (a != 1.0) os << a << "*";
      os << "x";
      if (k > 1) os << "^" << k;
    }
  }
  if (first) os << "0";
  os << " + O(x^" << p.order() + 1 << ")";
  return os.str();
}

}  // namespace isochron
