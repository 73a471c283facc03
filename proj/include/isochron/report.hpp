#pragma once

// Machine-readable run reports (JSON).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "isochron/criteria.hpp"
#include "isochron/dynamics.hpp"

namespace isochron {

inline constexpr const char* kReportSchemaVersion = "1";

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemRun {
  std::string name;
  std::string f;
  std::string g;
  std::string h;
  Interval domain;
  std::string convention = "canonical";
  std::optional<std::string> family;
  std::optional<std::string> variant;
  std::optional<Verdict> verdict;
  std::optional<CriterionId> deciding;
  std::optional<int> first_obstruction;
  std::vector<CriterionReport> criteria;
  std::optional<PeriodScan> scan;
  std::vector<NamedSeries> series;
  std::vector<NamedSeries> columns;
  std::map<std::string, double> scalars;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

struct RunReport {
  std::string command;
  int order = kDefaultOrder;
  double tol_rel = 1e-10;
  double tol_abs = 1e-14;
  std::optional<std::uint64_t> seed;
  std::vector<SystemRun> systems;
  std::vector<std::string> warnings;
  std::optional<double> elapsed_seconds;
};

// Non-finite doubles are written as null and read back as NaN.
nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

std::string serialize(const RunReport& r);
RunReport parse_report(const std::string& text);

SystemRun system_run(const std::string& name, const SystemSpec& sys, const std::string& convention = "canonical");

}  // namespace isochron
