#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "isochron/cli.hpp"
#include "isochron/report.hpp"

using namespace isochron;
using namespace isochron::cli;

namespace {

const std::string kSystems = std::string(ISOCHRON_SOURCE_DIR) + "/systems/";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("isochron_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_of_error(const std::string& text) {
  try {
    parse_system_file(text);
  } catch (const SystemFileError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("system file parsing") {
    const SystemFile f = parse_system_file(
        "# comment\n[system]\nname = demo\nf = \"0\"\ng = x   # damping\nh = 'x + x^3/9'\ndomain = -2, 3\n"
        "[options]\norder = 16\ntol = 1e-9\n");
    CHECK(f.name == "demo");
    CHECK(f.order == 16);
    CHECK(f.tol == 1e-9);
    CHECK(f.system.domain.lo == -2.0);
    CHECK(f.system.domain.hi == 3.0);
    CHECK(f.system.normalized);
    CHECK(eval(f.system.h, 1.0).value == doctest::Approx(10.0 / 9.0));

    const SystemFile back = parse_system_file(format_system_file(f));
    CHECK(back.name == "demo");
    CHECK(back.order == 16);
    CHECK(eval(back.system.h, 0.3).value == doctest::Approx(eval(f.system.h, 0.3).value).epsilon(1e-15));
  }

  TEST_CASE("system file errors carry line numbers") {
    CHECK(line_of_error("h = x\nbogus = 1\n") == 2);
    CHECK(line_of_error("h = x\nh = x\n") == 2);
    CHECK(line_of_error("[system]\n\nh = x +\n") == 3);
    CHECK(line_of_error("[nowhere]\nh = x\n") == 1);
    CHECK(line_of_error("h = x\ndomain = 0.1, 1\n") == 2);
    CHECK(line_of_error("h = x\norder = 2.5\n") == 2);
    CHECK(line_of_error("f = 0\n") == 0);
    CHECK(line_of_error("family = rational\nh = x\n") == 2);
    CHECK(line_of_error("family = nope\n") == 1);
    CHECK(line_of_error("h = x\nvariant = printed\n") == 2);
    CHECK(line_of_error("just words\n") == 1);
  }

  TEST_CASE("conventions and families") {
    const SystemFile s4 = load_system_file(kSystems + "rational-section4.toml");
    CHECK(s4.name == "rational-section4");
    CHECK(eval(s4.system.g, 0.5).value == doctest::Approx(0.5 / 1.25));
    REQUIRE_FALSE(s4.notes.empty());

    const SystemFile fam = load_system_file(kSystems + "rational.toml");
    CHECK(fam.family == std::optional<std::string>("rational"));
    CHECK(fam.order == 24);
    CHECK(fam.notes.size() == 2);

    const SystemFile asinh = parse_system_file("family = asinh-damping\nfamily_g = x + x^3/10\nvariant = printed\n");
    CHECK(asinh.variant == std::optional<std::string>("printed"));
  }

  TEST_CASE("exit codes") {
    CHECK(call({"check-isochrony", kSystems + "rational.toml"}).code == kHolds);
    CHECK(call({"check-isochrony", kSystems + "rational-section4.toml"}).code == kHolds);
    CHECK(call({"check-isochrony", kSystems + "cubic-lienard-detuned.toml"}).code == kFails);
    CHECK(call({"check-center", kSystems + "quadratic-damping.toml"}).code == kFails);
    CHECK(call({"check-center", kSystems + "duffing.toml"}).code == kHolds);
    CHECK(call({"check-isochrony", kSystems + "does-not-exist.toml"}).code == kUsage);
    CHECK(call({"check-isochrony", "--bogus", kSystems + "harmonic.toml"}).code == kUsage);
    CHECK(call({"check-isochrony", "--random-poly", "3"}).code == kUsage);
    CHECK(call({"check-isochrony"}).code == kUsage);
    CHECK(call({}).code == kUsage);
    CHECK(call({"generate-family", "--id", "family-9"}).code == kUsage);
    CHECK(call({"generate-family", "--id", "identity-damping", "--g", "x^2"}).code == kInapplicable);
    const Result help = call({"--help"});
    CHECK(help.code == kHolds);
    CHECK(help.out.find("check-isochrony") != std::string::npos);
  }

  TEST_CASE("check-isochrony report") {
    const Result r = call({"check-isochrony", kSystems + "cubic-lienard-detuned.toml", "--order", "12"});
    const RunReport rep = parse_report(r.out);
    CHECK(rep.command == "check-isochrony");
    CHECK(rep.order == 12);
    REQUIRE(rep.systems.size() == 1);
    CHECK(rep.systems[0].verdict == Verdict::fails);
    CHECK(rep.systems[0].first_obstruction == 3);
    CHECK(rep.systems[0].criteria.front().criterion_id == CriterionId::center);

    const Result random = call({"check-isochrony", "--random-poly", "4", "--seed", "7"});
    CHECK(random.code == kFails);
    const RunReport rr = parse_report(random.out);
    CHECK(rr.seed == std::optional<std::uint64_t>(7));
    CHECK(rr.systems.size() == 4);
    CHECK(call({"check-isochrony", "--random-poly", "4", "--seed", "7"}).out == random.out);
  }

  TEST_CASE("period-scan writes CSV") {
    const std::string csv = temp_path("scan.csv");
    const Result r = call({"period-scan", kSystems + "duffing.toml", "--amplitudes", "0.1,0.5,1.0", "--csv", csv,
                           "--threads", "2"});
    CHECK(r.code == kHolds);
    std::istringstream in(slurp(csv));
    std::string line;
    std::getline(in, line);
    CHECK(line == "amplitude,energy,period,status");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.substr(line.rfind(',') + 1) == "ok");
    }
    CHECK(rows == 3);
    std::remove(csv.c_str());
    CHECK(call({"period-scan", kSystems + "quadratic-well.toml", "--amplitudes", "5"}).code == kUsage);
    CHECK(call({"period-scan", kSystems + "duffing.toml", "--integrator-tol", "1e-3"}).code == kUsage);
  }

  TEST_CASE("involution, generate-family and reduce") {
    const std::string csv = temp_path("inv.csv");
    CHECK(call({"involution", kSystems + "quadratic-well.toml", "--points", "5", "--csv", csv}).code == kHolds);
    CHECK(slurp(csv).rfind("x,A,level_residual,involution_error\n", 0) == 0);
    std::remove(csv.c_str());

    const std::string emitted = temp_path("family.toml");
    const Result g = call({"generate-family", "--id", "sinh-damping", "--g", "x", "--emit", emitted});
    CHECK(g.code == kHolds);
    CHECK(call({"check-isochrony", emitted}).code == kHolds);
    std::remove(emitted.c_str());
    CHECK(call({"generate-family", "--id", "asinh-damping", "--g", "x + x^3/10", "--variant", "printed"}).code ==
          kFails);

    const Result red = call({"reduce", kSystems + "rational-explicit.toml", "--order", "10"});
    CHECK(red.code == kHolds);
    const RunReport rep = parse_report(red.out);
    REQUIRE(rep.systems.size() == 1);
    CHECK(rep.systems[0].series.size() == 8);
    CHECK(rep.systems[0].scalars.at("defining_residual") < 1e-12);
  }

  TEST_CASE("--out and --timing") {
    const std::string path = temp_path("report.json");
    const Result r = call({"check-center", kSystems + "harmonic.toml", "--out", path, "--timing"});
    CHECK(r.code == kHolds);
    CHECK(r.out.empty());
    const RunReport rep = parse_report(slurp(path));
    CHECK(rep.elapsed_seconds.has_value());
    std::remove(path.c_str());
  }
}
