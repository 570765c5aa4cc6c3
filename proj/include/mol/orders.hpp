#pragma once

// Markov order estimators built from a code length and empirical entropies.

#include "mol/codes.hpp"
#include "mol/stats.hpp"

#include <cstddef>
#include <string>

namespace mol {

struct OrderReport {
  std::size_t n = 0;
  std::string backend;
  double code_bits = 0.0;   // H(x) used in the comparison
  std::size_t order = 0;
  EntropyProfile profile;   // h_0..h_order
};

/// Least k with (n-k) h_k(x) <= H(x). Returns order 0 for the empty sequence.
OrderReport universal_markov_order(const FrequencyIndex& index, const CodeLength& code);

/// Same scan against a precomputed code length.
OrderReport universal_markov_order(const FrequencyIndex& index, double code_bits, std::string backend);

/// Least k maximizing PPM_k(x); orders within 1e-9 bits of the best count as ties.
std::size_t kt_order(const PpmLadder& ladder);
std::size_t kt_order(const FrequencyIndex& index);

inline constexpr double kKtTieTolerance = 1e-9;

/// Least k with h_k(x) <= LZ78(x)/n + lambda. Requires lambda > 0.
std::size_t mgz_order(const FrequencyIndex& index, double lambda);

struct RamTestResult {
  std::size_t order = 0;
  double alpha = 0.0;
  double statistic = 0.0;  // (n-M) h_M(x) - H_code(x)
  bool reject = false;     // statistic > log2(1/alpha)
};

/// Tests "Markov order <= M" by (n-M) h_M(x) <= H_code(x) + log2(1/alpha).
/// Requires 0 <= M < n and 0 < alpha < 1.
RamTestResult ram_test(const FrequencyIndex& index, std::size_t order, double alpha, const CodeLength& code);

}  // namespace mol
