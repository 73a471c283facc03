#pragma once

// Closed-form isochronous families. Each is named after its reduced
// Lienard damping g~(y): the constructors pick f so that y(x) = g(x),
// sinh(g(x)) or asinh(g(x)), and h from the odd relation
// h e^F = y + K^2/y^3.

#include <stdexcept>
#include <string>
#include <vector>

#include "isochron/system.hpp"

namespace isochron {

class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FamilyId { identity_damping, asinh_damping, sinh_damping, rational };
// Only meaningful for asinh_damping; the printed variant drops g''/g' from f.
enum class FamilyVariant { corrected, printed };

std::string to_string(FamilyId id);
std::string to_string(FamilyVariant v);
FamilyId family_from_string(const std::string& s);
FamilyVariant variant_from_string(const std::string& s);

struct FamilyInstance {
  FamilyId id = FamilyId::identity_damping;
  FamilyVariant variant = FamilyVariant::corrected;
  FunctionExpr g_input;
  SystemSpec system;
  std::vector<std::string> notes;
};

// g~ = y: f = g''/g', h = (g + g^3/9)/g'.
FamilyInstance identity_damping_family(const FunctionExpr& g, std::optional<Interval> domain = std::nullopt);
// g~ = asinh y: e^F = cosh(g) g', h e^F = sinh g + B^2/sinh^3 g with
// B = g cosh(2g)/4 - sinh(2g)/8.
FamilyInstance asinh_damping_family(const FunctionExpr& g, FamilyVariant variant = FamilyVariant::corrected,
                                    std::optional<Interval> domain = std::nullopt);
// g~ = sinh y: e^F = g'/sqrt(1+g^2), h e^F = asinh g + (asinh(g) sqrt(1+g^2) - g)^2/asinh^3 g.
FamilyInstance sinh_damping_family(const FunctionExpr& g, std::optional<Interval> domain = std::nullopt);
// f = 2x/(1+x^2), g = x/(1+x^2), h = [y + 3x^3(1+x^2/5)^2/(3+x^2)^3]/(1+x^2), y = x + x^3/3.
FamilyInstance rational_example();

// The same h with the alternative bracket 9x^3(1+x^2/5)^2/(3+x^2)^2 in place
// of 3x^3(1+x^2/5)^2/(3+x^2)^3. Not isochronous.
SystemSpec rational_printed_system();

FamilyInstance make_family(FamilyId id, const FunctionExpr& g, FamilyVariant variant = FamilyVariant::corrected,
                           std::optional<Interval> domain = std::nullopt);

}  // namespace isochron
