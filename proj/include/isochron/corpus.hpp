#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isochron/criteria.hpp"
#include "isochron/system.hpp"

namespace isochron {

struct CorpusEntry {
  std::string name;
  SystemSpec system;
  // Known isochronicity verdict, if any.
  std::optional<Verdict> expected;
  std::string note;
};

std::vector<CorpusEntry> builtin_corpus();

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& rng);

// Degree <= `degree` polynomials with f(0) = g(0) = h(0) = 0 and h'(0) = 1.
// Reversible systems have odd f, g, h; otherwise every monomial is present.
// Nonzero coefficients have magnitude in [0.2, 1] and random sign.
SystemSpec random_polynomial_system(std::mt19937_64& rng, bool reversible, int degree = 4);

// Alternates reversible and dense systems.
std::vector<CorpusEntry> random_polynomial_corpus(int count, std::uint64_t seed, int degree = 4);

}  // namespace isochron
