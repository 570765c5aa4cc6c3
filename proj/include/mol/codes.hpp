#pragma once

// Universal code-length backends. Every backend reports a pointwise entropy
// H(x) = -log2 Pi(x) in bits for a semi-distribution Pi over all finite strings.

#include "mol/sequence.hpp"
#include "mol/stats.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mol {

// ---------------------------------------------------------------------------
// PPM_k: adaptive add-one order-k Markov probabilities.

/// PPM_k(next | history) for an alphabet of size D. Uses 1/D while the
/// history is too short to hold a context followed by a symbol.
double ppm_predict(std::span<const Symbol> history, Symbol next, std::size_t k, std::size_t alphabet_size);

/// PPM_k(x_i | x_1^{i-1}) with 1-based position i.
double ppm_conditional(const Sequence& x, std::size_t i, std::size_t k);

/// -log2 PPM_k(x_1^n) via the symbol-by-symbol product.
double ppm_log_measure(const FrequencyIndex& index, std::size_t k);

/// -log2 PPM_k(x_1^n) via the factorial closed form (log-Gamma). Requires k <= n-2.
double ppm_log_measure_closed(const FrequencyIndex& index, std::size_t k);

/// -log2 Gamma(1 + 1/D), the lower end of the normalized PPM gap.
double ppm_alpha(std::size_t alphabet_size);

/// [-log PPM_k - k log D - (n-k) h_k] / (D |V_k(x_1^{n-1})|). Requires k <= n-2.
double ppm_bound_gap(const FrequencyIndex& index, std::size_t k);

enum class PpmRange {
  /// Orders 0..min(L, n-2) evaluated; PPM_k = D^-n exactly for every k > L.
  adaptive,
  /// Orders 0..n-2 evaluated one by one.
  exact,
};

/// -log2 PPM_k for k = 0..last_order(); every higher order has -log2 PPM_k = uniform_bits.
struct PpmLadder {
  std::size_t n = 0;
  std::size_t alphabet_size = 2;
  std::vector<double> bits;
  double uniform_bits = 0.0;

  double at(std::size_t k) const noexcept { return k < bits.size() ? bits[k] : uniform_bits; }
};

PpmLadder ppm_ladder(const FrequencyIndex& index, PpmRange range = PpmRange::adaptive);

/// H(x) for the PPM mixture Pi(x) = (6^2/pi^4)(n+1)^-2 sum_k PPM_k(x)/(k+1)^2.
double ppm_entropy(const PpmLadder& ladder);
double ppm_entropy(const FrequencyIndex& index, PpmRange range = PpmRange::adaptive);
double ppm_entropy(const Sequence& x, PpmRange range = PpmRange::adaptive);

// ---------------------------------------------------------------------------
// LZ78

/// Bits of the LZ78 incremental parse: phrase j costs ceil(log2 j) + ceil(log2 D);
/// a trailing incomplete phrase costs only its back-reference.
double lz78_code_length(const Sequence& x);

/// lz78_code_length + log2(pi^2/6) + 2 log2(n+1).
double lz78_entropy(const Sequence& x);

// ---------------------------------------------------------------------------
// Backends behind one interface.

class CodeLength {
 public:
  virtual ~CodeLength() = default;

  virtual std::string name() const = 0;

  /// Pointwise entropy H(x) in bits.
  virtual double bits(const FrequencyIndex& index) const = 0;
  double bits(const Sequence& x) const { return bits(FrequencyIndex(x)); }

  /// Length used by the critical region of the order test. Defaults to bits();
  /// LZ78 reports the raw code length without the length correction.
  virtual double test_bits(const FrequencyIndex& index) const { return bits(index); }
};

class PpmCode final : public CodeLength {
 public:
  explicit PpmCode(PpmRange range = PpmRange::adaptive) : range_(range) {}
  std::string name() const override { return "ppm"; }
  double bits(const FrequencyIndex& index) const override { return ppm_entropy(index, range_); }
  using CodeLength::bits;
  PpmRange range() const noexcept { return range_; }

 private:
  PpmRange range_;
};

class Lz78Code final : public CodeLength {
 public:
  std::string name() const override { return "lz78"; }
  double bits(const FrequencyIndex& index) const override { return lz78_entropy(index.sequence()); }
  double test_bits(const FrequencyIndex& index) const override { return lz78_code_length(index.sequence()); }
  using CodeLength::bits;
};

/// Arbitrary code length given as a function of the sequence.
class FunctionCode final : public CodeLength {
 public:
  FunctionCode(std::string name, std::function<double(const Sequence&)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  double bits(const FrequencyIndex& index) const override { return fn_(index.sequence()); }
  using CodeLength::bits;

 private:
  std::string name_;
  std::function<double(const Sequence&)> fn_;
};

/// "ppm" or "lz78"; throws std::invalid_argument otherwise.
std::unique_ptr<CodeLength> make_code(std::string_view name, bool ppm_exact = false);

/// Largest D^n that kraft_sum will enumerate.
inline constexpr std::size_t kKraftBudget = std::size_t{1} << 20;

/// sum over x in X^n of 2^-H(x), by enumeration. Throws std::length_error past the budget.
double kraft_sum(const CodeLength& code, std::size_t n, std::size_t alphabet_size);

/// Calls fn on every string in X^n in lexicographic order.
void for_each_string(std::size_t n, std::size_t alphabet_size, const std::function<void(const Sequence&)>& fn);

}  // namespace mol
