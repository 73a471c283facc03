// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isochron/analysis.hpp"
#include "isochron/cli.hpp"
#include "isochron/corpus.hpp"
#include "isochron/dynamics.hpp"
#include "isochron/families.hpp"
#include "isochron/involution.hpp"
#include "isochron/report.hpp"

using namespace isochron;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct ScanSummary {
  bool all_ok = true;
  double worst = 0.0;
};

ScanSummary scan_summary(const SystemSpec& sys, const std::vector<double>& amps) {
  ScanSummary s;
  for (const ScanRow& r : period_scan(numeric(sys), amps).rows) {
    if (r.status != RowStatus::ok) {
      s.all_ok = false;
      continue;
    }
    s.worst = std::max(s.worst, std::abs(r.period - kTwoPi));
  }
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

void constant_scan(Outcome& o, const std::string& label, const SystemSpec& sys, const std::vector<double>& amps,
                   double tol) {
  const ScanSummary s = scan_summary(sys, amps);
  o.require(s.all_ok, label + ": scan rows not all ok");
  o.require(s.worst < tol, label + ": max|T-2pi| = " + fmt(s.worst));
  if (o.pass) o.detail += (o.detail.empty() ? "" : ", ") + label + " max|T-2pi| = " + fmt(s.worst);
}

// Odd g~ with g~'(0) = 1 and random odd coefficients through degree 9.
std::vector<PowerSeries> random_odd_dampings(int count, int order) {
  std::mt19937_64 rng(20261014);
  std::vector<PowerSeries> out;
  for (int i = 0; i < count; ++i) {
    PowerSeries g(order);
    g[1] = 1.0;
    for (int k = 3; k <= 9; k += 2) g[k] = 2.0 * unit_uniform(rng) - 1.0;
    out.push_back(g);
  }
  return out;
}

// h~ = y + K^2/y^3, K = \int y g~.
PowerSeries odd_relation_h(const PowerSeries& g) {
  const PowerSeries y = PowerSeries::identity(g.order());
  const PowerSeries K = integrate(y * g);
  const PowerSeries K2 = K * K;
  return y.truncated(K2.order() - 3) + shift_down(K2, 3);
}

Outcome ac1() {
  Outcome o;
  const SystemSpec sys = make_system("0", "0", "x", Interval{-2.0, 2.0});
  constant_scan(o, "harmonic", sys, linspace(0.1, 1.5, 15), 1e-8);
  return o;
}

Outcome ac2() {
  Outcome o;
  const SystemSpec sys = make_system("0", "x", "x + x^3/9", Interval{-2.0, 2.0});
  const CriterionReport s = s_relation_check(reduce_padded(sys, 24), 24);
  o.require(s.verdict == Verdict::holds, "s relation does not hold");
  o.require(s.max_residual < 1e-14, "s relation residual " + fmt(s.max_residual));
  o.detail = "s-relation residual " + fmt(s.max_residual);
  constant_scan(o, "scan to 1.5", sys, linspace(0.1, 1.5, 15), 1e-6);
  return o;
}

Outcome ac3() {
  Outcome o;
  std::ostringstream out, err;
  const int code = cli::run({"check-isochrony", std::string(ISOCHRON_SOURCE_DIR) + "/systems/rational.toml"}, out, err);
  o.require(code == cli::kHolds, "check-isochrony exit " + std::to_string(code));
  if (code == cli::kHolds) {
    const RunReport rep = parse_report(out.str());
    bool noted = false;
    for (const std::string& n : rep.systems.at(0).notes) noted |= n.find("a_3 = 1 against the required 0.111111") != std::string::npos;
    o.require(noted, "report notes lack the printed-vs-derived discrepancy");
  }
  constant_scan(o, "scan 0.1-0.8", rational_example().system, linspace(0.1, 0.8, 8), 1e-6);
  return o;
}

Outcome ac4() {
  Outcome o;
  double worst = 0.0;
  for (const PowerSeries& g : random_odd_dampings(20, 40)) {
    const PowerSeries h = odd_relation_h(g);
    const auto a = recurrence_coefficients(g, 30);
    for (int k = 0; k <= 30; ++k) worst = std::max(worst, std::abs(h[k] - a[static_cast<std::size_t>(k)]));
    const ReducedLienard red = reduce_series(PowerSeries(g.order()), g, h);
    o.require(recurrence_check(red, 30).verdict == Verdict::holds, "recurrence check does not hold");
  }
  o.require(worst < 1e-12, "corrected mismatch " + fmt(worst));
  const PowerSeries y = PowerSeries::identity(40);
  const double printed = recurrence_coefficients(y, 30, RecurrenceVariant::printed)[3];
  const double corrected = recurrence_coefficients(y, 30)[3];
  o.require(std::abs(printed - 1.0 / 3.0) < 1e-15 && std::abs(corrected - 1.0 / 9.0) < 1e-15,
            "k=1 coefficients " + fmt(printed) + " / " + fmt(corrected));
  const CriterionReport pr =
      recurrence_check(reduce_series(PowerSeries(40), y, odd_relation_h(y)), 30, {}, RecurrenceVariant::printed);
  o.require(pr.verdict == Verdict::fails && pr.first_obstruction == 3, "printed variant does not fail at k=1");
  if (o.pass) o.detail = "max mismatch " + fmt(worst) + "; printed a_3 = 1/3 vs 1/9, fails at order 3";
  return o;
}

Outcome ac5() {
  Outcome o;
  double worst = 0.0;
  for (const PowerSeries& g : random_odd_dampings(20, kDefaultOrder + kOrderPadding)) {
    const ReducedLienard red = reduce_series(PowerSeries(g.order()), g, odd_relation_h(g));
    const PowerSeries s = (solve_s(red) - PowerSeries::identity(g.order())).truncated(kDefaultOrder);
    worst = std::max(worst, s.max_abs());
  }
  o.require(worst < 1e-12, "max |s - y| coefficient " + fmt(worst));
  if (o.pass) o.detail = "max |s - y| coefficient " + fmt(worst);
  return o;
}

Outcome ac6() {
  Outcome o;
  int checked = 0, scanned = 0, worst_order = 0;
  double min_dev = INFINITY;
  for (const CorpusEntry& e : random_polynomial_corpus(50, 20261014)) {
    const IsochronyAnalysis a = analyze_isochrony(e.system);
    ++checked;
    if (a.verdict != Verdict::fails || !a.first_obstruction || *a.first_obstruction > 20) {
      o.require(false, e.name + " verdict " + to_string(a.verdict));
      continue;
    }
    worst_order = std::max(worst_order, *a.first_obstruction);
    if (*a.first_obstruction > 9) continue;
    const auto d = deviation_at_largest(numeric(e.system), default_amplitudes(e.system.domain));
    if (!d) {
      o.require(false, e.name + ": no returning amplitude");
      continue;
    }
    ++scanned;
    min_dev = std::min(min_dev, d->deviation);
    o.require(d->deviation > 1e-4, e.name + ": deviation " + fmt(d->deviation));
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " systems fail, max first obstruction " + std::to_string(worst_order) +
               ", min deviation " + fmt(min_dev) + " over " + std::to_string(scanned) + " scans";
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  const FunctionExpr g = parse("x + x^3/10");
  const FamilyInstance good = asinh_damping_family(g, FamilyVariant::corrected);
  const FamilyInstance bad = asinh_damping_family(g, FamilyVariant::printed);
  const std::vector<double> amps = default_amplitudes(good.system.domain);
  constant_scan(o, "corrected", good.system, amps, 1e-6);
  const ScanSummary b = scan_summary(bad.system, default_amplitudes(bad.system.domain));
  o.require(b.worst > 1e-4, "printed deviation only " + fmt(b.worst));
  if (o.pass) o.detail += ", printed max|T-2pi| = " + fmt(b.worst);
  for (FamilyVariant v : {FamilyVariant::corrected, FamilyVariant::printed}) {
    const FamilyInstance lin = asinh_damping_family(parse("x"), v);
    constant_scan(o, "g=x " + to_string(v), lin.system, default_amplitudes(lin.system.domain), 1e-6);
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  for (const char* gs : {"x", "sinh(x)"}) {
    const FamilyInstance fi = sinh_damping_family(parse(gs));
    const CriterionReport s = s_relation_check(reduce_padded(fi.system, 24), 24);
    o.require(s.verdict == Verdict::holds, std::string("g=") + gs + ": s relation fails");
    constant_scan(o, std::string("g=") + gs, fi.system, default_amplitudes(fi.system.domain), 1e-6);
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  const FunctionExpr h = parse("x + x^2");
  const auto ev = std::make_shared<Evaluator>(h);
  const Potential pot([ev](double x) { return (*ev)(x); });
  const double A = involution_numeric(pot, 0.5);
  o.require(std::abs(A + 1.0) < 1e-12, "A(0.5) = " + fmt(A));
  o.require(std::abs(pot(A) - pot(0.5)) < 1e-12, "level mismatch");
  o.require(std::abs(pot(0.5) - 1.0 / 6.0) < 1e-12, "level is not 1/6");
  const InvolutionTable t = build_involution_table(h, kDefaultOrder, 20);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.grid.size(); ++i) worst = std::max(worst, std::abs(t.series_A.eval(t.grid[i]) - t.A_values[i]));
  o.require(t.grid.size() == 20 && worst < 1e-7, "series vs numeric " + fmt(worst));
  o.require(t.series_involution_error < 1e-9, "A o A - id = " + fmt(t.series_involution_error));
  o.require(potential_involution_check(parse("x + x^3"), 24).verdict == Verdict::fails, "Duffing does not fail");
  o.require(potential_involution_check(parse("x"), 24).verdict == Verdict::holds, "h = x does not hold");
  if (o.pass) {
    o.detail = "A(0.5) = " + fmt(A) + ", grid mismatch " + fmt(worst) + ", A o A - id " + fmt(t.series_involution_error);
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  struct Case {
    const char* h;
    std::vector<double> energies;
  };
  const std::vector<Case> cases = {{"x", {0.01, 0.05, 0.1, 0.2, 0.4}},
                                   {"x + x^3", {0.01, 0.05, 0.1, 0.2, 0.4}},
                                   {"x + x^2", {0.01, 0.04, 0.08, 0.12, 0.15}}};
  double worst = 0.0, worst_limit = 0.0;
  for (const Case& c : cases) {
    const auto ev = std::make_shared<Evaluator>(parse(c.h));
    const Potential pot([ev](double x) { return (*ev)(x); });
    const NumericSystem sys = numeric(make_system("0", "0", c.h, Interval{-0.99, 2.0}));
    for (double e : c.energies) {
      const double b = turning_points(pot, e).second;
      const double diff = std::abs(return_period(sys, b).period - period_quadrature(pot, e));
      worst = std::max(worst, diff);
      o.require(diff < 1e-7, std::string(c.h) + " at c = " + fmt(e) + ": " + fmt(diff));
    }
    const double lim = std::abs(period_quadrature(pot, 1e-8) - kTwoPi);
    worst_limit = std::max(worst_limit, lim);
    o.require(lim < 1e-5, std::string(c.h) + ": small-energy limit off by " + fmt(lim));
  }
  if (o.pass) o.detail = "max method gap " + fmt(worst) + ", small-energy |T-2pi| " + fmt(worst_limit);
  return o;
}

Outcome ac11() {
  Outcome o;
  int pairs = 0, systems = 0;
  for (const CorpusEntry& e : builtin_corpus()) {
    ++systems;
    const IsochronyAnalysis a = analyze_isochrony(e.system);
    for (std::size_t i = 0; i < a.criteria.size(); ++i) {
      for (std::size_t j = i + 1; j < a.criteria.size(); ++j) {
        const CriterionReport &p = a.criteria[i], &q = a.criteria[j];
        if (p.verdict == Verdict::inapplicable || q.verdict == Verdict::inapplicable) continue;
        ++pairs;
        o.require(p.verdict == q.verdict, e.name + ": " + to_string(p.criterion_id) + " vs " + to_string(q.criterion_id));
      }
    }
    if (e.expected) o.require(a.verdict == *e.expected, e.name + ": verdict " + to_string(a.verdict));
  }
  if (o.pass) o.detail = std::to_string(pairs) + " applicable pairs agree over " + std::to_string(systems) + " systems";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", ac1, 1.0},  {"AC2", ac2, 5.0},   {"AC3", ac3, 5.0},  {"AC4", ac4, 0.0},
      {"AC5", ac5, 0.0},  {"AC6", ac6, 60.0},  {"AC7", ac7, 0.0},  {"AC8", ac8, 0.0},
      {"AC9", ac9, 0.0},  {"AC10", ac10, 0.0}, {"AC11", ac11, 0.0},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && dt >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; runtime " + fmt(dt) + " s over budget " + fmt(c.budget_seconds) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("%-4s %s  %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), dt);
  }
  return failures == 0 ? 0 : 1;
}
