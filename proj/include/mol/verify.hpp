#pragma once

// Invariant suites over exhaustive small-alphabet enumerations and seeded
// random strings. Each suite checks one inequality or identity on every case
// and keeps the first counterexample.

#include "mol/codes.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mol {

struct VerifyConfig {
  std::size_t max_n = 10;         // exhaustive lengths 1..max_n
  std::size_t alphabet_size = 2;  // exhaustive alphabet
  std::size_t random_cases = 0;   // extra seeded random strings
  std::size_t random_max_n = 2000;
  std::size_t random_max_alphabet = 4;
  std::uint64_t seed = 0;
  /// Replaces both code backends by H(x) = -1 (negative control).
  bool faulty_backend = false;
  std::size_t jobs = 1;
};

struct SuiteResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  std::string counterexample;  // first violation, empty when none

  bool passed() const noexcept { return violations == 0; }
};

/// Names accepted by run_suite, in default order.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const VerifyConfig& config);

/// Seeded strings of mixed alphabet size, length and memory used by the random part of every suite.
std::vector<Sequence> random_cases(const VerifyConfig& config);

}  // namespace mol
