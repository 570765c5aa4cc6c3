#pragma once

// Pointwise mutual information from code lengths, the vocabulary bound on it
// for the PPM mixture, and power-law (Hilberg) exponent estimation.

#include "mol/codes.hpp"
#include "mol/sequence.hpp"
#include "mol/sources.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace mol {

/// I(x_1^n; x_{n+1}^m) = H(x_1^n) + H(x_{n+1}^m) - H(x_1^m). Requires 1 <= split < m.
double pointwise_mi(const Sequence& x, std::size_t split, const CodeLength& code);

struct MiReport {
  std::size_t n = 0;          // split point
  std::size_t m = 0;          // total length
  double mi = 0.0;            // pointwise MI, bits
  std::size_t order = 0;      // universal order M(x_1^m)
  std::uint64_t vocab = 0;    // |V_M(x_1^m)|
  double code_bits = 0.0;     // H(x_1^m)
  std::optional<double> bound_rhs;  // set when the PPM bound applies
  bool admissible = false;    // M < n and M < m - n

  bool bound_ok() const { return !bound_rhs || mi <= *bound_rhs; }
};

/// MI with order and vocabulary at the split. The bound is evaluated when `code`
/// is the PPM mixture and the split is admissible.
MiReport mi_report(const Sequence& x, std::size_t split, const CodeLength& code);

/// 2 [D |V_M(x_1^m)| + m log D / H(x_1^m) + 2 log(pi^2/6) + 4] log(e^2 m) for the
/// PPM mixture. Throws std::domain_error naming the violated side of M < n, M < m-n.
double mi_bound_rhs(const Sequence& x, std::size_t split, PpmRange range = PpmRange::adaptive);

/// Same formula from already computed parts.
double mi_bound_formula(std::size_t alphabet_size, std::uint64_t vocab, std::size_t m, double code_bits);

struct ExpectedMiReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  double lhs_mean = 0.0;  // estimate of E I(X_1^n; X_{n+1}^{2n})
  double lhs_se = 0.0;
  double rhs_mean = 0.0;  // estimate of the expectation bound
  double rhs_se = 0.0;
  bool indicator = false; // lhs_mean <= rhs_mean + 2 * combined SE
};

/// Monte Carlo check of the expectation bound on block MI with the PPM mixture.
ExpectedMiReport expected_mi_check(const SourceModel& source, std::size_t n, std::size_t trials, std::uint64_t seed,
                                   std::size_t jobs = 1);

struct MiProfileRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double mi = 0.0;
  std::size_t order = 0;
  std::uint64_t vocab = 0;
  std::optional<double> bound_rhs;
  bool bound_ok = true;
};

/// One row per block size n: I(x_1^n; x_{n+1}^{2n}) with order and vocabulary of x_1^{2n}.
std::vector<MiProfileRow> mi_profile(const Sequence& x, const std::vector<std::size_t>& blocks,
                                     const CodeLength& code);

struct HilbergEstimate {
  double exponent = 0.0;        // slope clamped to [0, 1]
  double slope = 0.0;           // raw least-squares slope
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> grid;     // n values, ascending
  std::vector<double> values;   // s(n)
  std::vector<double> log_plus; // log+ s(n)
  std::vector<double> ratios;   // log+ s(n) / log n
  std::size_t fitted_points = 0;
};

/// log+ x = log2(x + 1) for x >= 0, else 0.
double log_plus(double x);

/// Least-squares slope of log+ s(n) against log n over the larger half of the grid.
/// Requires at least 4 distinct grid points, all >= 2.
HilbergEstimate hilberg_estimate(const std::map<double, double>& values);

}  // namespace mol
