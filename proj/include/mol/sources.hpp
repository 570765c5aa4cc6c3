#pragma once

// Stationary ergodic sources with exact information-theoretic oracles, and
// the Monte Carlo runner for order-estimator consistency experiments.

#include "mol/sequence.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mol {

/// Markov chain of order M over D symbols (M = 0 is an i.i.d. source).
///
/// A context is the last M symbols packed base D with the oldest symbol most
/// significant; the successor of context c after symbol a is (c*D + a) mod D^M.
class SourceModel {
 public:
  enum class Kind { iid, markov };

  /// Largest context space accepted (D^M states).
  static constexpr std::size_t kMaxContexts = std::size_t{1} << 12;

  static SourceModel iid(std::vector<double> probabilities);
  /// rows[c][a] = P(a | context c); rows.size() must equal D^order.
  static SourceModel markov(std::size_t alphabet_size, std::size_t order, std::vector<std::vector<double>> rows);
  /// Repeats the symbol `order` positions back with probability `stay`, otherwise
  /// picks one of the other D-1 symbols uniformly. Requires order >= 1.
  static SourceModel sticky(std::size_t alphabet_size, std::size_t order, double stay);
  /// Rows drawn from a symmetric Dirichlet(concentration) and mixed with the
  /// uniform floor so that every entry is at least `floor`.
  static SourceModel random(std::size_t alphabet_size, std::size_t order, std::uint64_t seed, double concentration,
                            double floor = 1e-3);

  Kind kind() const noexcept { return order_ == 0 ? Kind::iid : Kind::markov; }
  std::size_t order() const noexcept { return order_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t contexts() const noexcept { return rows_.size(); }
  double transition(std::size_t context, Symbol next) const { return rows_.at(context).at(next); }
  const std::vector<double>& stationary() const noexcept { return stationary_; }
  const std::string& description() const noexcept { return description_; }

  /// Initial context drawn from the stationary law, then n transitions.
  Sequence sample(std::size_t n, std::uint64_t seed) const;

  /// h_k^P in bits. Throws std::length_error when D^max(k, M) exceeds 2^20.
  double cond_entropy(std::size_t k) const;
  /// h^P = h_M^P.
  double entropy_rate() const;
  /// R_n = -log2 sum_x P(x_1^n)^2 by a transfer-matrix recursion over context pairs.
  double renyi_block_entropy(std::size_t n) const;
  /// P(x_1^n) under the stationary law.
  double probability(std::span<const Symbol> x) const;

 private:
  SourceModel(std::size_t alphabet_size, std::size_t order, std::vector<std::vector<double>> rows,
              std::string description);
  std::size_t successor(std::size_t context, Symbol a) const noexcept {
    return (context * alphabet_size_ + a) % rows_.size();
  }

  std::size_t alphabet_size_;
  std::size_t order_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> cdf_;
  std::vector<double> stationary_;
  std::vector<double> stationary_cdf_;
  std::string description_;
};

// ---------------------------------------------------------------------------
// Consistency experiments

struct ExperimentConfig {
  std::vector<std::size_t> lengths;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> backends{"ppm"};
  bool ppm_exact = false;
  bool kt = true;
  std::optional<double> mgz_lambda;
  std::size_t jobs = 1;
};

struct TrialOutcome {
  std::size_t order = 0;          // universal Markov order
  std::size_t kt = 0;             // Krichevsky-Trofimov order (0 when disabled)
  std::optional<std::size_t> mgz;
  double code_bits = 0.0;         // H(x)
  double h_at_order = 0.0;        // h_{M(x)}(x)
  std::size_t max_repetition = 0; // L(x)
};

struct ExperimentRow {
  std::size_t n = 0;
  std::string backend;
  std::vector<TrialOutcome> trials;  // in trial order
  std::map<std::size_t, std::size_t> order_histogram;
  double hit_rate = 0.0;
  double mean_order = 0.0;
  double mean_kt = 0.0;
  double mean_h_at_order = 0.0;
  double mean_rate = 0.0;  // mean H(x)/n
};

struct ExperimentReport {
  std::string source;
  std::size_t true_order = 0;
  double entropy_rate = 0.0;
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;  // lengths outer, backends inner

  const ExperimentRow& row(std::size_t n, const std::string& backend) const;
};

/// Samples `trials` sequences per length (trial t uses derive_seed(seed, t), so
/// shorter samples are prefixes of longer ones) and estimates their orders.
ExperimentReport consistency_experiment(const SourceModel& source, const ExperimentConfig& config);

}  // namespace mol
