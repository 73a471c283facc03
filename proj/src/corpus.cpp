#include "isochron/corpus.hpp"

#include <sstream>

#include "isochron/families.hpp"

namespace isochron {

namespace {

double coefficient(std::mt19937_64& rng) {
  const double mag = 0.2 + 0.8 * unit_uniform(rng);
  return unit_uniform(rng) < 0.5 ? -mag : mag;
}

std::string polynomial(const std::vector<double>& c) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    if (!first) os << " + ";
    os << "(" << c[k] << ")";
    if (k > 0) os << "*x^" << k;
    first = false;
  }
  return first ? "0" : os.str();
}

CorpusEntry entry(std::string name, SystemSpec sys, std::optional<Verdict> expected, std::string note = {}) {
  return {std::move(name), std::move(sys), expected, std::move(note)};
}

}  // namespace

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

SystemSpec random_polynomial_system(std::mt19937_64& rng, bool reversible, int degree) {
  std::vector<double> f(degree + 1, 0.0), g(degree + 1, 0.0), h(degree + 1, 0.0);
  h[1] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    const bool odd = k % 2 == 1;
    if (!reversible || odd) {
      f[k] = coefficient(rng);
      g[k] = coefficient(rng);
      if (k >= 2) h[k] = coefficient(rng);
    }
  }
  return make_system(polynomial(f), polynomial(g), polynomial(h));
}

std::vector<CorpusEntry> random_polynomial_corpus(int count, std::uint64_t seed, int degree) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  for (int i = 0; i < count; ++i) {
    const bool reversible = i % 2 == 0;
    out.push_back(entry("random-" + std::to_string(seed) + "-" + std::to_string(i),
                        random_polynomial_system(rng, reversible, degree), Verdict::fails,
                        reversible ? "reversible" : "dense"));
  }
  return out;
}

std::vector<CorpusEntry> builtin_corpus() {
  std::vector<CorpusEntry> c;
  c.push_back(entry("harmonic", make_system("0", "0", "x"), Verdict::holds));
  c.push_back(entry("cubic-lienard", make_system("0", "x", "x + x^3/9"), Verdict::holds));
  c.push_back(entry("cubic-lienard-detuned", make_system("0", "x", "x + x^3"), Verdict::fails));
  c.push_back(entry("duffing", make_system("0", "0", "x + x^3"), Verdict::fails));
  c.push_back(entry("quadratic-well", make_system("0", "0", "x + x^2", Interval{-0.9, 0.9}), Verdict::fails));
  c.push_back(entry("quadratic-damping", make_system("0", "x^2", "x"), Verdict::fails, "not a center"));
  c.push_back(entry("tanh-damping", make_system("0", "tanh(x)", "x"), Verdict::fails));
  c.push_back(entry("sine-potential", make_system("0", "0", "sin(x)", Interval{-2.5, 2.5}), Verdict::fails));
  c.push_back(entry("quadratic-friction", make_system("x", "0", "x"), Verdict::fails));

  const auto add_family = [&](const std::string& name, const FamilyInstance& fi, Verdict v) {
    c.push_back(entry(name, fi.system, v, fi.notes.empty() ? std::string() : fi.notes.back()));
  };
  add_family("rational", rational_example(), Verdict::holds);
  c.push_back(entry("rational-printed", rational_printed_system(), Verdict::fails));
  add_family("identity-damping-tanh", identity_damping_family(parse("tanh(x)")), Verdict::holds);
  add_family("identity-damping-cubic", identity_damping_family(parse("x + x^3/10")), Verdict::holds);
  add_family("asinh-damping-x", asinh_damping_family(parse("x")), Verdict::holds);
  add_family("asinh-damping-cubic", asinh_damping_family(parse("x + x^3/10")), Verdict::holds);
  add_family("asinh-damping-cubic-printed", asinh_damping_family(parse("x + x^3/10"), FamilyVariant::printed),
             Verdict::fails);
  add_family("sinh-damping-x", sinh_damping_family(parse("x")), Verdict::holds);
  add_family("sinh-damping-sinh", sinh_damping_family(parse("sinh(x)")), Verdict::holds);
  return c;
}

}  // namespace isochron
