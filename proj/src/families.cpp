#include "isochron/families.hpp"

#include <cmath>
#include <sstream>

#include "isochron/criteria.hpp"
#include "isochron/reduction.hpp"

namespace isochron {

namespace {

constexpr int kGridPoints = 64;

void require_odd(const FunctionExpr& g) {
  PowerSeries gs;
  try {
    gs = taylor(g, kDefaultOrder);
  } catch (const DomainError& e) {
    throw ParityError(std::string("g is not analytic at 0: ") + e.what());
  }
  if (!is_odd(gs)) throw ParityError("g is not odd: " + to_string(gs, 4));
}

bool slope_positive(const Evaluator& dg, double x) {
  try {
    return dg(x) > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

// Checks g' > 0 on a grid of the requested domain, or shrinks a heuristic
// domain until it holds.
Interval positive_slope_domain(const FunctionExpr& g, const Interval& dom, bool strict) {
  const Evaluator dg(derivative(g));
  if (!slope_positive(dg, 0.0)) throw PositivityError("g'(0) must be positive");
  double r = dom.radius();
  for (int k = 1; k <= kGridPoints; ++k) {
    const double x = dom.hi * k / (kGridPoints + 1), xl = dom.lo * k / (kGridPoints + 1);
    if (slope_positive(dg, x) && slope_positive(dg, xl)) continue;
    if (strict) {
      std::ostringstream os;
      os << "g' is not positive on the domain near x = " << (slope_positive(dg, x) ? xl : x);
      throw PositivityError(os.str());
    }
    r = 0.9 * std::min(std::abs(x), std::abs(xl));
    break;
  }
  return strict ? dom : Interval{std::max(dom.lo, -r), std::min(dom.hi, r)};
}

FamilyInstance finish(FamilyId id, FamilyVariant variant, const FunctionExpr& g, FunctionExpr f, FunctionExpr h,
                      std::optional<Interval> domain) {
  FamilyInstance inst;
  inst.id = id;
  inst.variant = variant;
  inst.g_input = g;
  SystemSpec probe = make_system(f, g, h, domain);
  const Interval dom = positive_slope_domain(g, probe.domain, domain.has_value());
  inst.system = make_system(std::move(f), g, std::move(h), dom);
  inst.system.domain_from_user = domain.has_value();
  if (!inst.system.normalized) {
    throw NotNormalized("family construction produced an unnormalized system: " + inst.system.normalization_note);
  }
  inst.notes.push_back("family " + to_string(id) + (id == FamilyId::asinh_damping ? " (" + to_string(variant) + ")" : ""));
  return inst;
}

}  // namespace

std::string to_string(FamilyId id) {
  switch (id) {
    case FamilyId::identity_damping: return "identity-damping";
    case FamilyId::asinh_damping: return "asinh-damping";
    case FamilyId::sinh_damping: return "sinh-damping";
    case FamilyId::rational: return "rational";
  }
  return "unknown";
}

std::string to_string(FamilyVariant v) { return v == FamilyVariant::corrected ? "corrected" : "printed"; }

FamilyId family_from_string(const std::string& s) {
  for (FamilyId id : {FamilyId::identity_damping, FamilyId::asinh_damping, FamilyId::sinh_damping, FamilyId::rational}) {
    if (to_string(id) == s) return id;
  }
  throw std::invalid_argument("unknown family id: " + s);
}

FamilyVariant variant_from_string(const std::string& s) {
  if (s == "corrected") return FamilyVariant::corrected;
  if (s == "printed") return FamilyVariant::printed;
  throw std::invalid_argument("unknown family variant: " + s);
}

FamilyInstance identity_damping_family(const FunctionExpr& g, std::optional<Interval> domain) {
  require_odd(g);
  const FunctionExpr dg = derivative(g);
  const FunctionExpr f = derivative(dg) / dg;
  const FunctionExpr h = (g + (1.0 / 9.0) * pow(g, 3)) / dg;
  return finish(FamilyId::identity_damping, FamilyVariant::corrected, g, f, h, domain);
}

FamilyInstance asinh_damping_family(const FunctionExpr& g, FamilyVariant variant, std::optional<Interval> domain) {
  require_odd(g);
  const FunctionExpr dg = derivative(g);
  const FunctionExpr two_g = 2.0 * g;
  FunctionExpr f = tanh(g) * dg;
  if (variant == FamilyVariant::corrected) f = f + derivative(dg) / dg;
  const FunctionExpr B = 0.25 * g * cosh(two_g) - 0.125 * sinh(two_g);
  const FunctionExpr h = (sinh(g) + pow(B, 2) / pow(sinh(g), 3)) / (cosh(g) * dg);
  FamilyInstance inst = finish(FamilyId::asinh_damping, variant, g, f, h, domain);
  if (variant == FamilyVariant::printed) {
    inst.notes.push_back("printed variant: f = tanh(g) g' omits g''/g' although e^F = cosh(g) g'");
  }
  return inst;
}

FamilyInstance sinh_damping_family(const FunctionExpr& g, std::optional<Interval> domain) {
  require_odd(g);
  const FunctionExpr dg = derivative(g);
  const FunctionExpr root = sqrt(pow(g, 2) + 1.0);
  const FunctionExpr f = derivative(dg) / dg - g * dg / (pow(g, 2) + 1.0);
  const FunctionExpr ag = asinh(g);
  const FunctionExpr h = (ag + pow(ag * root - g, 2) / pow(ag, 3)) * root / dg;
  return finish(FamilyId::sinh_damping, FamilyVariant::corrected, g, f, h, domain);
}

FamilyInstance rational_example() {
  const FunctionExpr f = parse("2*x/(1+x^2)");
  const FunctionExpr g = parse("x/(1+x^2)");
  const FunctionExpr h = parse("(x + x^3/3 + 3*x^3*(1+x^2/5)^2/(3+x^2)^3)/(1+x^2)");
  FamilyInstance inst = finish(FamilyId::rational, FamilyVariant::corrected, g, f, h, Interval{-0.9, 0.9});

  const ReducedLienard derived = reduce(inst.system, 12);
  const ReducedLienard printed = reduce(rational_printed_system(), 12);
  const auto required = recurrence_coefficients(derived.g_tilde, 3);
  std::ostringstream os;
  os << "h~ = y + K^2/y^3 evaluates to x + x^3/3 + 3x^3(1+x^2/5)^2/(3+x^2)^3; the bracket "
        "9x^3(1+x^2/5)^2/(3+x^2)^2 gives h~ coefficient a_3 = "
     << printed.h_tilde[3] << " against the required " << required[3] << " (derived form gives "
     << derived.h_tilde[3] << ")";
  inst.notes.push_back(os.str());
  return inst;
}

SystemSpec rational_printed_system() {
  return make_system("2*x/(1+x^2)", "x/(1+x^2)", "(x + x^3/3 + 9*x^3*(1+x^2/5)^2/(3+x^2)^2)/(1+x^2)",
                     Interval{-0.9, 0.9});
}

FamilyInstance make_family(FamilyId id, const FunctionExpr& g, FamilyVariant variant, std::optional<Interval> domain) {
  switch (id) {
    case FamilyId::identity_damping: return identity_damping_family(g, domain);
    case FamilyId::asinh_damping: return asinh_damping_family(g, variant, domain);
    case FamilyId::sinh_damping: return sinh_damping_family(g, domain);
    case FamilyId::rational: return rational_example();
  }
  throw std::invalid_argument("unknown family id");
}

}  // namespace isochron
