#pragma once

// Combined center and isochronicity verdict for one system.

#include <optional>
#include <string>
#include <vector>

#include "isochron/criteria.hpp"

namespace isochron {

struct IsochronyAnalysis {
  int order = kDefaultOrder;
  CriterionReport center;
  std::vector<CriterionReport> criteria;
  Verdict verdict = Verdict::inapplicable;
  std::optional<CriterionId> deciding;
  std::optional<int> first_obstruction;
  std::vector<std::string> warnings;
};

// Fails when the center check fails; otherwise the first applicable of
// s_relation, odd_relation, recurrence, zero_damping, differential_identity
// decides. damping_involution (f = 0) and potential_involution (f = g = 0)
// run alongside. Disagreeing applicable criteria become warnings.
IsochronyAnalysis analyze_isochrony(const SystemSpec& sys, int order = kDefaultOrder, Tolerance tol = {});

// f, g, h polynomial and not the linear oscillator.
bool is_nonlinear_polynomial(const SystemSpec& sys);

// For a nonlinear polynomial system reported isochronous: rechecks at twice
// the order; an obstruction there turns the verdict to fails, otherwise a
// warning is attached.
void polynomial_guard(const SystemSpec& sys, IsochronyAnalysis& analysis, Tolerance tol = {});

}  // namespace isochron
