#pragma once

// Center and isochronicity tests phrased as residual series. Every check
// compares coefficients against per-order thresholds (see prefix_thresholds)
// and reports the lowest order at which a residual exceeds its threshold.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isochron/reduction.hpp"
#include "isochron/series.hpp"
#include "isochron/system.hpp"

namespace isochron {

class Inapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CriterionId {
  center,                 // first integral is a function of the energy
  s_relation,             // h~ = s s' (1 + K^2/s^4), K = \int s g~
  odd_relation,           // g~ odd and h~ = y + K^2/y^3, K = \int y g~
  recurrence,             // coefficient recurrence for h~ in terms of g~
  zero_damping,           // g == 0: phi - X even in the energy coordinate X
  differential_identity,  // x-derivative of the odd relation
  potential_involution,   // involution of H, for g == f == 0
  damping_involution,     // involution of G = \int g, for f == 0
};

enum class Verdict { holds, fails, inapplicable };

std::string to_string(CriterionId id);
std::string to_string(Verdict v);
CriterionId criterion_from_string(const std::string& s);
Verdict verdict_from_string(const std::string& s);

struct NamedSeries {
  std::string name;
  std::vector<double> coeffs;
};

struct CriterionReport {
  CriterionId criterion_id = CriterionId::center;
  Verdict verdict = Verdict::inapplicable;
  std::vector<double> residuals;
  std::optional<int> first_obstruction;
  double tolerance = 1e-10;
  std::vector<std::string> notes;
  std::vector<NamedSeries> series;
  double max_residual = 0.0;
};

// Marks the report holds/fails from residual r against per-order thresholds.
void settle(CriterionReport& report, const PowerSeries& r, const std::vector<double>& thresholds);

// No even coefficient reaches its per-order threshold.
bool is_odd(const PowerSeries& p, Tolerance tol = {});
PowerSeries even_part(const PowerSeries& p);

// Extra orders used when expanding a system before running checks so that
// residuals are exact through the requested order.
inline constexpr int kOrderPadding = 8;

ReducedLienard reduce_padded(const SystemSpec& sys, int order);

CriterionReport center_check(const SystemSpec& sys, int order = kDefaultOrder, Tolerance tol = {});
CriterionReport center_check_series(const PowerSeries& f, const PowerSeries& g, const PowerSeries& h,
                                    int order, Tolerance tol = {});

// Half-difference s = (y - A)/2 of the involution A of G~. Throws
// Inapplicable when G~ has no quadratic leading term.
PowerSeries solve_s(const ReducedLienard& red, Tolerance tol = {});

CriterionReport s_relation_residual(const ReducedLienard& red, const PowerSeries& s, int order,
                                     Tolerance tol = {});
// Runs solve_s; Inapplicable from it becomes an inapplicable report.
CriterionReport s_relation_check(const ReducedLienard& red, int order, Tolerance tol = {});

CriterionReport odd_relation_check(const ReducedLienard& red, int order, Tolerance tol = {});

struct GeneratedH {
  PowerSeries series;  // h in x
  ScalarFn eval;
  std::shared_ptr<const LienardChart> chart;
};

// h = e^{-F} (y + K^2/y^3), K = \int_0^y xi g~(xi) dxi, for odd f and g.
GeneratedH generate_h(const FunctionExpr& f, const FunctionExpr& g, int order = kDefaultOrder,
                      std::optional<Interval> domain = std::nullopt);

enum class RecurrenceVariant { corrected, printed };

// Required h~ coefficients a_i (i <= order) from the odd g~ coefficients b_j.
std::vector<double> recurrence_coefficients(const PowerSeries& g_tilde, int order,
                                            RecurrenceVariant variant = RecurrenceVariant::corrected);

CriterionReport recurrence_check(const ReducedLienard& red, int order, Tolerance tol = {},
                            RecurrenceVariant variant = RecurrenceVariant::corrected);

CriterionReport zero_damping_check(const ReducedLienard& red, int order, Tolerance tol = {});

CriterionReport differential_identity_check(const ReducedLienard& red, int order, Tolerance tol = {});

}  // namespace isochron
