#pragma once

// Command-line front end. Subcommands: check-center, check-isochrony,
// period-scan, involution, generate-family, reduce.
//
// System files are key = value lines, optionally grouped under [sections],
// with # comments. Keys: f, g, h (expressions), order, tol, domain
// ("lo, hi"), convention (canonical | paper-section-4), name, and family,
// family_g, variant to build a system from a named family instead of f, g, h.
// With convention = paper-section-4 the keys are the coefficients of
// y' = f y^2 + g y + h with x' = -y, and the system is flipped to canonical
// form by negating g.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isochron/system.hpp"

namespace isochron::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kInapplicable = 2, kUsage = 3 };

class SystemFileError : public std::runtime_error {
 public:
  SystemFileError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct SystemFile {
  std::string name;
  SystemSpec system;
  std::string convention = "canonical";
  std::optional<int> order;
  std::optional<double> tol;
  std::optional<std::string> family;
  std::optional<std::string> variant;
  std::vector<std::string> notes;
};

SystemFile parse_system_file(const std::string& text, const std::string& name = "system");
SystemFile load_system_file(const std::string& path);
std::string format_system_file(const SystemFile& file);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isochron::cli
