#include "isochron/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "isochron/analysis.hpp"
#include "isochron/corpus.hpp"
#include "isochron/families.hpp"
#include "isochron/involution.hpp"
#include "isochron/report.hpp"

namespace isochron::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(const std::string& s, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw SystemFileError(line, key + ": not a number: " + s);
}

Interval parse_domain(std::string s, int line) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '(' || s.front() == '[')) s = s.substr(1, s.size() - 2);
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw SystemFileError(line, "domain: expected \"lo, hi\"");
  const Interval d{to_double(trim(s.substr(0, comma)), line, "domain"),
                   to_double(trim(s.substr(comma + 1)), line, "domain")};
  if (!(d.lo < 0.0 && d.hi > 0.0)) throw SystemFileError(line, "domain must contain 0 in its interior");
  return d;
}

FunctionExpr parse_key(const std::map<std::string, std::pair<std::string, int>>& kv, const std::string& key,
                       const std::string& fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return parse(fallback);
  try {
    return parse(it->second.first);
  } catch (const SyntaxError& e) {
    throw SystemFileError(it->second.second, key + ": " + e.what());
  }
}

const std::vector<std::string> kSections = {"system", "options", "family"};
const std::vector<std::string> kKeys = {"name", "f", "g", "h", "order", "tol", "domain",
                                        "convention", "family", "family_g", "variant"};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path);
}

struct Common {
  std::optional<int> order;
  std::optional<double> tol;
  std::string out_path;
  bool timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--order", c.order, "truncation order N")->check(CLI::Range(2, 200));
  sub->add_option("--tol", c.tol, "relative coefficient tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out_path, "write the JSON report here instead of standard output");
  sub->add_flag("--timing", c.timing, "record elapsed time in the report");
}

Tolerance tolerance_of(const Common& c, const SystemFile* f) {
  Tolerance t;
  if (f && f->tol) t.rel = *f->tol;
  if (c.tol) t.rel = *c.tol;
  return t;
}

int order_of(const Common& c, const SystemFile* f) {
  if (c.order) return *c.order;
  if (f && f->order) return *f->order;
  return kDefaultOrder;
}

int exit_for(std::optional<Verdict> v) {
  if (!v || *v == Verdict::inapplicable) return kInapplicable;
  return *v == Verdict::holds ? kHolds : kFails;
}

int combine(const std::vector<SystemRun>& runs) {
  bool any_inapplicable = false;
  for (const auto& r : runs) {
    const int code = exit_for(r.verdict);
    if (code == kFails) return kFails;
    if (code == kInapplicable) any_inapplicable = true;
  }
  return any_inapplicable ? kInapplicable : kHolds;
}

SystemRun run_for(const SystemFile& file) {
  SystemRun run = system_run(file.name, file.system, file.convention);
  run.family = file.family;
  run.variant = file.variant;
  run.notes = file.notes;
  return run;
}

void attach_analysis(SystemRun& run, const IsochronyAnalysis& a) {
  run.criteria.clear();
  run.criteria.push_back(a.center);
  run.criteria.insert(run.criteria.end(), a.criteria.begin(), a.criteria.end());
  run.verdict = a.verdict;
  run.deciding = a.deciding;
  run.first_obstruction = a.first_obstruction;
  run.warnings.insert(run.warnings.end(), a.warnings.begin(), a.warnings.end());
}

void attach_scan(SystemRun& run, const SystemSpec& sys, std::vector<double> amplitudes, const ScanOptions& opts) {
  if (amplitudes.empty()) amplitudes = default_amplitudes(sys.domain);
  run.scan = period_scan(numeric(sys), amplitudes, opts);
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string scan_csv(const PeriodScan& scan) {
  std::ostringstream os;
  os << "amplitude,energy,period,status\n";
  for (const auto& r : scan.rows) {
    os << csv_number(r.amplitude) << ',' << (r.energy ? csv_number(*r.energy) : "") << ','
       << (r.status == RowStatus::ok || r.status == RowStatus::open ? csv_number(r.period) : "") << ','
       << to_string(r.status) << '\n';
  }
  return os.str();
}

std::string involution_csv(const InvolutionTable& t) {
  std::ostringstream os;
  os << "x,A,level_residual,involution_error\n";
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    os << csv_number(t.grid[i]) << ',' << csv_number(t.A_values[i]) << ',' << csv_number(t.level_residuals[i])
       << ',' << csv_number(t.involution_errors[i]) << '\n';
  }
  return os.str();
}

NamedSeries series_entry(const std::string& name, const PowerSeries& p) {
  return {name, std::vector<double>(p.coeffs().begin(), p.coeffs().end())};
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int emit(RunReport& report, const Common& c, int code) {
    if (c.timing) {
      report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    const std::string text = serialize(report);
    if (c.out_path.empty()) {
      out_ << text;
    } else {
      write_text(c.out_path, text);
    }
    for (const auto& w : report.warnings) err_ << "warning: " << w << '\n';
    for (const auto& s : report.systems) {
      for (const auto& w : s.warnings) err_ << "warning [" << s.name << "]: " << w << '\n';
    }
    return code;
  }

  RunReport base(const std::string& cmd, const Common& c, const SystemFile* f) {
    RunReport r;
    r.command = cmd;
    r.order = order_of(c, f);
    const Tolerance t = tolerance_of(c, f);
    r.tol_rel = t.rel;
    r.tol_abs = t.abs;
    return r;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ScanOptions scan_options(double integrator_tol, unsigned threads) {
  ScanOptions o;
  o.orbit.tol = integrator_tol;
  o.threads = threads;
  return o;
}

}  // namespace

SystemFile parse_system_file(const std::string& text, const std::string& name) {
  std::map<std::string, std::pair<std::string, int>> kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw SystemFileError(line, "unterminated section header");
      const std::string sec = trim(s.substr(1, s.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), sec) == kSections.end()) {
        throw SystemFileError(line, "unknown section [" + sec + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw SystemFileError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = unquote(trim(s.substr(eq + 1)));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw SystemFileError(line, "unknown key " + key);
    if (kv.count(key)) throw SystemFileError(line, "duplicate key " + key);
    if (value.empty()) throw SystemFileError(line, "empty value for " + key);
    kv[key] = {value, line};
  }

  SystemFile file;
  file.name = kv.count("name") ? kv["name"].first : name;
  if (kv.count("convention")) {
    file.convention = kv["convention"].first;
    if (file.convention != "canonical" && file.convention != "paper-section-4") {
      throw SystemFileError(kv["convention"].second, "convention must be canonical or paper-section-4");
    }
  }
  if (kv.count("order")) {
    const double o = to_double(kv["order"].first, kv["order"].second, "order");
    if (o != std::floor(o) || o < 2 || o > 200) throw SystemFileError(kv["order"].second, "order must be an integer in [2, 200]");
    file.order = static_cast<int>(o);
  }
  if (kv.count("tol")) {
    file.tol = to_double(kv["tol"].first, kv["tol"].second, "tol");
    if (!(*file.tol > 0.0)) throw SystemFileError(kv["tol"].second, "tol must be positive");
  }
  std::optional<Interval> domain;
  if (kv.count("domain")) domain = parse_domain(kv["domain"].first, kv["domain"].second);

  if (kv.count("family")) {
    for (const char* k : {"f", "g", "h"}) {
      if (kv.count(k)) throw SystemFileError(kv[k].second, std::string("key ") + k + " cannot be combined with family");
    }
    FamilyId id;
    FamilyVariant variant = FamilyVariant::corrected;
    try {
      id = family_from_string(kv["family"].first);
      if (kv.count("variant")) variant = variant_from_string(kv["variant"].first);
    } catch (const std::invalid_argument& e) {
      throw SystemFileError(kv["family"].second, e.what());
    }
    const FamilyInstance fi = make_family(id, parse_key(kv, "family_g", "x"), variant, domain);
    file.system = fi.system;
    file.family = to_string(id);
    if (id == FamilyId::asinh_damping) file.variant = to_string(variant);
    file.notes = fi.notes;
    return file;
  }
  for (const char* k : {"family_g", "variant"}) {
    if (kv.count(k)) throw SystemFileError(kv[k].second, std::string("key ") + k + " requires family");
  }
  if (!kv.count("h")) throw SystemFileError(0, "missing key h");
  FunctionExpr f = parse_key(kv, "f", "0");
  FunctionExpr g = parse_key(kv, "g", "0");
  const FunctionExpr h = parse_key(kv, "h", "0");
  if (file.convention == "paper-section-4") {
    g = -g;
    file.notes.push_back("paper-section-4 convention: y -> -y applied, damping negated");
  }
  file.system = make_system(std::move(f), std::move(g), h, domain);
  return file;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SystemFileError(0, "cannot read system file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_system_file(ss.str(), name);
}

std::string format_system_file(const SystemFile& file) {
  std::ostringstream os;
  os.precision(17);
  os << "[system]\n";
  os << "name = " << file.name << '\n';
  os << "f = " << to_string(file.system.f) << '\n';
  os << "g = " << to_string(file.system.g) << '\n';
  os << "h = " << to_string(file.system.h) << '\n';
  os << "domain = " << file.system.domain.lo << ", " << file.system.domain.hi << '\n';
  if (file.order || file.tol) {
    os << "\n[options]\n";
    if (file.order) os << "order = " << *file.order << '\n';
    if (file.tol) os << "tol = " << *file.tol << '\n';
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Center and isochronicity checks for x' = y, y' = -h(x) - g(x) y - f(x) y^2", "isochron"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");

  Runner runner(out, err);
  int code = kUsage;

  // check-center
  Common cc;
  std::string cc_file;
  auto* center_cmd = app.add_subcommand("check-center", "center check from the first-integral expansion");
  center_cmd->add_option("system", cc_file, "system file")->required();
  add_common(center_cmd, cc);

  // check-isochrony
  Common ic;
  std::string ic_file;
  std::optional<int> random_count;
  std::optional<std::uint64_t> seed;
  bool ic_scan = false;
  auto* iso_cmd = app.add_subcommand("check-isochrony", "combined isochronicity verdict");
  iso_cmd->add_option("system", ic_file, "system file");
  auto* rp = iso_cmd->add_option("--random-poly", random_count, "check N seeded random polynomial systems")
                 ->check(CLI::Range(1, 100000));
  iso_cmd->add_option("--seed", seed, "64-bit seed for --random-poly")->needs(rp);
  iso_cmd->add_flag("--scan", ic_scan, "also run a period scan at default amplitudes");
  add_common(iso_cmd, ic);

  // period-scan
  Common sc;
  std::string sc_file, sc_csv;
  std::vector<double> amplitudes;
  double integrator_tol = 1e-12;
  unsigned threads = 0;
  auto* scan_cmd = app.add_subcommand("period-scan", "numerical periods over a set of amplitudes");
  scan_cmd->add_option("system", sc_file, "system file")->required();
  scan_cmd->add_option("--amplitudes", amplitudes, "comma-separated starting amplitudes x0")->delimiter(',');
  scan_cmd->add_option("--csv", sc_csv, "write amplitude,energy,period,status rows here");
  scan_cmd->add_option("--integrator-tol", integrator_tol, "ODE tolerance in [1e-13, 1e-6]")
      ->check(CLI::Range(1e-13, 1e-6));
  scan_cmd->add_option("--threads", threads, "worker threads (0: hardware concurrency)");
  add_common(scan_cmd, sc);

  // involution
  Common vc;
  std::string inv_file, inv_csv;
  int points = 20;
  std::optional<double> radius;
  auto* inv_cmd = app.add_subcommand("involution", "involution of the potential H = int h");
  inv_cmd->add_option("system", inv_file, "system file")->required();
  inv_cmd->add_option("--points", points, "grid points")->check(CLI::Range(2, 10000));
  inv_cmd->add_option("--radius", radius, "grid radius (default: series trust radius)")->check(CLI::PositiveNumber);
  inv_cmd->add_option("--csv", inv_csv, "write x,A,level_residual,involution_error rows here");
  add_common(inv_cmd, vc);

  // generate-family
  Common gc;
  std::string fam_id, fam_g = "x", fam_variant = "corrected", emit_path;
  bool gen_scan = false;
  auto* gen_cmd = app.add_subcommand("generate-family", "build and check an isochronous family instance");
  gen_cmd->add_option("--id", fam_id, "identity-damping | asinh-damping | sinh-damping | rational")->required();
  gen_cmd->add_option("--g", fam_g, "odd damping g with g' > 0");
  gen_cmd->add_option("--variant", fam_variant, "corrected | printed (asinh-damping only)");
  gen_cmd->add_option("--emit", emit_path, "write the generated system file here");
  gen_cmd->add_flag("--scan", gen_scan, "also run a period scan at default amplitudes");
  add_common(gen_cmd, gc);

  // reduce
  Common rc;
  std::string red_file;
  auto* red_cmd = app.add_subcommand("reduce", "reduced Lienard form y'' + g~(y) y' + h~(y) = 0");
  red_cmd->add_option("system", red_file, "system file")->required();
  add_common(red_cmd, rc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (center_cmd->parsed()) {
      const SystemFile file = load_system_file(cc_file);
      RunReport report = runner.base("check-center", cc, &file);
      SystemRun run = run_for(file);
      const CriterionReport c = center_check(file.system, report.order, tolerance_of(cc, &file));
      run.criteria.push_back(c);
      run.verdict = c.verdict;
      run.deciding = CriterionId::center;
      run.first_obstruction = c.first_obstruction;
      report.systems.push_back(std::move(run));
      code = runner.emit(report, cc, exit_for(c.verdict));
    } else if (iso_cmd->parsed()) {
      if (random_count && !seed) throw CLI::ValidationError("--random-poly", "requires --seed");
      if (random_count.has_value() == !ic_file.empty()) {
        throw CLI::ValidationError("check-isochrony", "give either a system file or --random-poly N --seed S");
      }
      std::vector<SystemFile> files;
      if (random_count) {
        for (auto& e : random_polynomial_corpus(*random_count, *seed)) {
          SystemFile f;
          f.name = e.name;
          f.system = e.system;
          f.notes.push_back(e.note);
          files.push_back(std::move(f));
        }
      } else {
        files.push_back(load_system_file(ic_file));
      }
      RunReport report = runner.base("check-isochrony", ic, random_count ? nullptr : &files.front());
      report.seed = seed;
      for (const auto& f : files) {
        SystemRun run = run_for(f);
        attach_analysis(run, analyze_isochrony(f.system, order_of(ic, &f), tolerance_of(ic, &f)));
        if (ic_scan) attach_scan(run, f.system, {}, {});
        report.systems.push_back(std::move(run));
      }
      code = runner.emit(report, ic, combine(report.systems));
    } else if (scan_cmd->parsed()) {
      const SystemFile file = load_system_file(sc_file);
      RunReport report = runner.base("period-scan", sc, &file);
      SystemRun run = run_for(file);
      for (double a : amplitudes) {
        if (!file.system.domain.contains(a) || a == 0.0) {
          throw CLI::ValidationError("--amplitudes", "amplitude " + csv_number(a) + " outside the system domain");
        }
      }
      attach_scan(run, file.system, amplitudes, scan_options(integrator_tol, threads));
      const bool all_ok = std::all_of(run.scan->rows.begin(), run.scan->rows.end(),
                                      [](const ScanRow& r) { return r.status == RowStatus::ok; });
      if (!sc_csv.empty()) write_text(sc_csv, scan_csv(*run.scan));
      report.systems.push_back(std::move(run));
      code = runner.emit(report, sc, all_ok ? kHolds : kInapplicable);
    } else if (inv_cmd->parsed()) {
      const SystemFile file = load_system_file(inv_file);
      RunReport report = runner.base("involution", vc, &file);
      SystemRun run = run_for(file);
      const int order = report.order;
      const InvolutionTable t = build_involution_table(file.system.h, order, points, radius);
      run.series.push_back(series_entry("A", t.series_A));
      run.series.push_back(series_entry("rho", t.rho));
      run.columns.push_back({"x", t.grid});
      run.columns.push_back({"A", t.A_values});
      run.columns.push_back({"level_residual", t.level_residuals});
      run.columns.push_back({"involution_error", t.involution_errors});
      run.scalars["trust_radius"] = t.trust_radius;
      run.scalars["series_involution_error"] = t.series_involution_error;
      const CriterionReport c = potential_involution_check(file.system.h, order, tolerance_of(vc, &file));
      run.criteria.push_back(c);
      run.verdict = c.verdict;
      run.deciding = c.criterion_id;
      run.first_obstruction = c.first_obstruction;
      if (!file.system.f.is_constant(0.0) || !file.system.g.is_constant(0.0)) {
        run.notes.push_back("involution of int h only; f and g are ignored");
      }
      if (!inv_csv.empty()) write_text(inv_csv, involution_csv(t));
      report.systems.push_back(std::move(run));
      code = runner.emit(report, vc, kHolds);
    } else if (gen_cmd->parsed()) {
      FamilyId id;
      FamilyVariant variant;
      try {
        id = family_from_string(fam_id);
        variant = variant_from_string(fam_variant);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("generate-family", e.what());
      }
      const FamilyInstance fi = make_family(id, parse(fam_g), variant);
      SystemFile file;
      file.name = to_string(id) + (id == FamilyId::rational ? "" : " g=" + to_string(fi.g_input));
      file.system = fi.system;
      file.family = to_string(id);
      if (id == FamilyId::asinh_damping) file.variant = to_string(variant);
      file.notes = fi.notes;
      RunReport report = runner.base("generate-family", gc, nullptr);
      SystemRun run = run_for(file);
      attach_analysis(run, analyze_isochrony(fi.system, report.order, tolerance_of(gc, nullptr)));
      if (gen_scan) attach_scan(run, fi.system, {}, {});
      if (!emit_path.empty()) write_text(emit_path, format_system_file(file));
      report.systems.push_back(std::move(run));
      code = runner.emit(report, gc, combine(report.systems));
    } else if (red_cmd->parsed()) {
      const SystemFile file = load_system_file(red_file);
      RunReport report = runner.base("reduce", rc, &file);
      SystemRun run = run_for(file);
      require_normalized(file.system);
      const ReducedLienard red = reduce(file.system, report.order);
      run.series.push_back(series_entry("F", red.F));
      run.series.push_back(series_entry("expF", red.expF));
      run.series.push_back(series_entry("y_of_x", red.y_of_x));
      run.series.push_back(series_entry("u", red.u));
      run.series.push_back(series_entry("g_tilde", red.g_tilde));
      run.series.push_back(series_entry("h_tilde", red.h_tilde));
      run.series.push_back(series_entry("G_tilde", red.G_tilde));
      run.series.push_back(series_entry("H_tilde", red.H_tilde));
      run.scalars["defining_residual"] = red.defining_residual;
      report.systems.push_back(std::move(run));
      code = runner.emit(report, rc, kHolds);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SystemFileError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInapplicable;
  }
  return code;
}

}  // namespace isochron::cli
