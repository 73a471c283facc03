#include "isochron/report.hpp"

#include <cmath>
#include <limits>

namespace isochron {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_num(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ReportFormatError("expected a number");
  return j.get<double>();
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> read_nums(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(read_num(x));
  return v;
}

json named_list(const std::vector<NamedSeries>& list) {
  json a = json::array();
  for (const auto& s : list) a.push_back({{"name", s.name}, {"coeffs", nums(s.coeffs)}});
  return a;
}

std::vector<NamedSeries> read_named_list(const json& j) {
  std::vector<NamedSeries> out;
  for (const auto& s : j) out.push_back({s.at("name").get<std::string>(), read_nums(s.at("coeffs"))});
  return out;
}

json criterion_json(const CriterionReport& c) {
  json j = {{"criterion_id", to_string(c.criterion_id)},
            {"verdict", to_string(c.verdict)},
            {"residuals", nums(c.residuals)},
            {"first_obstruction", c.first_obstruction ? json(*c.first_obstruction) : json(nullptr)},
            {"tolerance", num(c.tolerance)},
            {"max_residual", num(c.max_residual)},
            {"notes", c.notes},
            {"series", named_list(c.series)}};
  return j;
}

CriterionReport read_criterion(const json& j) {
  CriterionReport c;
  c.criterion_id = criterion_from_string(j.at("criterion_id").get<std::string>());
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  c.residuals = read_nums(j.at("residuals"));
  if (!j.at("first_obstruction").is_null()) c.first_obstruction = j.at("first_obstruction").get<int>();
  c.tolerance = read_num(j.at("tolerance"));
  c.max_residual = read_num(j.at("max_residual"));
  c.notes = j.at("notes").get<std::vector<std::string>>();
  c.series = read_named_list(j.at("series"));
  return c;
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> read_opt_num(const json& j) {
  if (j.is_null()) return std::nullopt;
  return read_num(j);
}

json scan_json(const PeriodScan& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"amplitude", num(r.amplitude)},
                    {"energy", opt_num(r.energy)},
                    {"period", num(r.period)},
                    {"status", to_string(r.status)},
                    {"closure_error", num(r.closure_error)},
                    {"quadrature_period", opt_num(r.quadrature_period)},
                    {"message", r.message}});
  }
  return {{"method", s.method},
          {"integrator_tol", num(s.integrator_tol)},
          {"closure_tol", num(s.closure_tol)},
          {"constancy_tol", num(s.constancy_tol)},
          {"max_deviation", opt_num(s.max_deviation)},
          {"monotonicity", to_string(s.monotonicity)},
          {"rows", rows}};
}

PeriodScan read_scan(const json& j) {
  PeriodScan s;
  s.method = j.at("method").get<std::string>();
  s.integrator_tol = read_num(j.at("integrator_tol"));
  s.closure_tol = read_num(j.at("closure_tol"));
  s.constancy_tol = read_num(j.at("constancy_tol"));
  s.max_deviation = read_opt_num(j.at("max_deviation"));
  s.monotonicity = monotonicity_from_string(j.at("monotonicity").get<std::string>());
  for (const auto& r : j.at("rows")) {
    ScanRow row;
    row.amplitude = read_num(r.at("amplitude"));
    row.energy = read_opt_num(r.at("energy"));
    row.period = read_num(r.at("period"));
    row.status = row_status_from_string(r.at("status").get<std::string>());
    row.closure_error = read_num(r.at("closure_error"));
    row.quadrature_period = read_opt_num(r.at("quadrature_period"));
    row.message = r.at("message").get<std::string>();
    s.rows.push_back(row);
  }
  return s;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json system_json(const SystemRun& s) {
  json criteria = json::array();
  for (const auto& c : s.criteria) criteria.push_back(criterion_json(c));
  json scalars = json::object();
  for (const auto& [k, v] : s.scalars) scalars[k] = num(v);
  return {{"name", s.name},
          {"f", s.f},
          {"g", s.g},
          {"h", s.h},
          {"domain", {num(s.domain.lo), num(s.domain.hi)}},
          {"convention", s.convention},
          {"family", opt(s.family)},
          {"variant", opt(s.variant)},
          {"verdict", s.verdict ? json(to_string(*s.verdict)) : json(nullptr)},
          {"deciding", s.deciding ? json(to_string(*s.deciding)) : json(nullptr)},
          {"first_obstruction", opt(s.first_obstruction)},
          {"criteria", criteria},
          {"scan", s.scan ? scan_json(*s.scan) : json(nullptr)},
          {"series", named_list(s.series)},
          {"columns", named_list(s.columns)},
          {"scalars", scalars},
          {"warnings", s.warnings},
          {"notes", s.notes}};
}

template <class T>
std::optional<T> read_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

SystemRun read_system(const json& j) {
  SystemRun s;
  s.name = j.at("name").get<std::string>();
  s.f = j.at("f").get<std::string>();
  s.g = j.at("g").get<std::string>();
  s.h = j.at("h").get<std::string>();
  s.domain = {read_num(j.at("domain").at(0)), read_num(j.at("domain").at(1))};
  s.convention = j.at("convention").get<std::string>();
  s.family = read_opt<std::string>(j.at("family"));
  s.variant = read_opt<std::string>(j.at("variant"));
  if (!j.at("verdict").is_null()) s.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  if (!j.at("deciding").is_null()) s.deciding = criterion_from_string(j.at("deciding").get<std::string>());
  s.first_obstruction = read_opt<int>(j.at("first_obstruction"));
  for (const auto& c : j.at("criteria")) s.criteria.push_back(read_criterion(c));
  if (!j.at("scan").is_null()) s.scan = read_scan(j.at("scan"));
  s.series = read_named_list(j.at("series"));
  s.columns = read_named_list(j.at("columns"));
  for (const auto& [k, v] : j.at("scalars").items()) s.scalars[k] = read_num(v);
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
  s.notes = j.at("notes").get<std::vector<std::string>>();
  return s;
}

}  // namespace

json to_json(const RunReport& r) {
  json systems = json::array();
  for (const auto& s : r.systems) systems.push_back(system_json(s));
  json j = {{"schema_version", kReportSchemaVersion},
            {"command", r.command},
            {"order", r.order},
            {"tolerance", {{"rel", num(r.tol_rel)}, {"abs", num(r.tol_abs)}}},
            {"seed", opt(r.seed)},
            {"systems", systems},
            {"warnings", r.warnings}};
  if (r.elapsed_seconds) j["timing"] = {{"elapsed_seconds", num(*r.elapsed_seconds)}};
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<std::string>() != kReportSchemaVersion) {
      throw ReportFormatError("unsupported report schema version");
    }
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.order = j.at("order").get<int>();
    r.tol_rel = read_num(j.at("tolerance").at("rel"));
    r.tol_abs = read_num(j.at("tolerance").at("abs"));
    r.seed = read_opt<std::uint64_t>(j.at("seed"));
    for (const auto& s : j.at("systems")) r.systems.push_back(read_system(s));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("timing")) r.elapsed_seconds = read_num(j.at("timing").at("elapsed_seconds"));
    return r;
  } catch (const json::exception& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  }
}

std::string serialize(const RunReport& r) { return to_json(r).dump(2) + "\n"; }

RunReport parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ReportFormatError(std::string("report is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

SystemRun system_run(const std::string& name, const SystemSpec& sys, const std::string& convention) {
  SystemRun s;
  s.name = name;
  s.f = to_string(sys.f);
  s.g = to_string(sys.g);
  s.h = to_string(sys.h);
  s.domain = sys.domain;
  s.convention = convention;
  return s;
}

}  // namespace isochron
